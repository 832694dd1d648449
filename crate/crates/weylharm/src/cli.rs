//! Command-line driver: argument handling, text and JSON output.
//!
//! Exit codes: `0` on success, `1` on domain errors (for example a
//! non-invariant operator passed to `reduce`), `2` on syntax errors in an
//! expression or in the command line itself. All errors go to the error
//! stream with a machine-readable `error:<kind>:` prefix.

use crate::expr::{parse_op, parse_poly, ParseError};
use crate::harmonic::{
    almansi_decompose, basis_change_recursive, cellular_decompose, gamma_harmonic_from_coeffs,
    gamma_harmonic_to_coeffs, l2_disc_inner_product, module_inner_product, o_basis,
    polyharmonic_order, GammaHarmonicCoefficients,
};
use crate::invariance::{factor_invariant_basis_element, is_rotation_invariant, rewrite_in_generators};
use crate::reduction::{kernel_bounded, lambda_m, projector_as_operator};
use crate::scalar::GaussRational;
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;

/// Declarative shape of one subcommand.
pub struct CommandSpec {
    pub name: &'static str,
    /// Flags taking a value.
    pub value_flags: &'static [&'static str],
    /// Boolean flags.
    pub switch_flags: &'static [&'static str],
    /// Number of positional expression arguments.
    pub positionals: usize,
    pub usage: &'static str,
}

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec { name: "normalize", value_flags: &[], switch_flags: &[], positionals: 1, usage: "normalize <op-expr>" },
    CommandSpec { name: "invariant", value_flags: &[], switch_flags: &[], positionals: 1, usage: "invariant <op-expr>" },
    CommandSpec { name: "factor", value_flags: &[], switch_flags: &[], positionals: 1, usage: "factor <op-expr>" },
    CommandSpec { name: "generators", value_flags: &[], switch_flags: &[], positionals: 1, usage: "generators <op-expr>" },
    CommandSpec { name: "reduce", value_flags: &["m"], switch_flags: &[], positionals: 1, usage: "reduce --m <int> <op-expr>" },
    CommandSpec { name: "apply", value_flags: &[], switch_flags: &[], positionals: 2, usage: "apply <op-expr> <poly-expr>" },
    CommandSpec { name: "project", value_flags: &["set", "pick"], switch_flags: &[], positionals: 1, usage: "project --set <ints> --pick <int> <poly-expr>" },
    CommandSpec { name: "kernel", value_flags: &["max-deg"], switch_flags: &[], positionals: 1, usage: "kernel --max-deg <n> <op-expr>" },
    CommandSpec { name: "order", value_flags: &[], switch_flags: &[], positionals: 1, usage: "order <poly-expr>" },
    CommandSpec { name: "almansi", value_flags: &[], switch_flags: &[], positionals: 1, usage: "almansi <poly-expr>" },
    CommandSpec { name: "cellular", value_flags: &[], switch_flags: &[], positionals: 1, usage: "cellular <poly-expr>" },
    CommandSpec { name: "gamma-expand", value_flags: &["g1", "g2", "coeffs"], switch_flags: &[], positionals: 0, usage: "gamma-expand --g1 <scalar> --g2 <scalar> --coeffs <m:c,...>" },
    CommandSpec { name: "gamma-coeffs", value_flags: &["g1", "g2"], switch_flags: &[], positionals: 1, usage: "gamma-coeffs --g1 <scalar> --g2 <scalar> <poly-expr>" },
    CommandSpec { name: "inner", value_flags: &[], switch_flags: &["l2"], positionals: 2, usage: "inner [--l2] <poly-expr> <poly-expr>" },
    CommandSpec { name: "obasis", value_flags: &["m", "n"], switch_flags: &[], positionals: 0, usage: "obasis --m <nat> --n <nat>" },
];

enum CliError {
    Usage(String),
    Syntax(String),
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Syntax(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn render(&self) -> String {
        match self {
            CliError::Usage(msg) => format!("error:usage:{msg}"),
            CliError::Syntax(msg) => format!("error:syntax:{msg}"),
            CliError::Domain(msg) => format!("error:domain:{msg}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Syntax(e.to_string())
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

struct ParsedArgs {
    values: BTreeMap<String, String>,
    switches: Vec<String>,
    positionals: Vec<String>,
    json: bool,
}

fn parse_args(spec: &CommandSpec, args: &[String], json: bool) -> Result<ParsedArgs, CliError> {
    let mut values = BTreeMap::new();
    let mut switches = Vec::new();
    let mut positionals = Vec::new();
    let mut iter = args.iter().peekable();
    while let Some(arg) = iter.next() {
        if let Some(name) = arg.strip_prefix("--") {
            if spec.switch_flags.contains(&name) {
                switches.push(name.to_string());
            } else if spec.value_flags.contains(&name) {
                let value = iter
                    .next()
                    .ok_or_else(|| CliError::Usage(format!("flag --{name} expects a value")))?;
                values.insert(name.to_string(), value.clone());
            } else {
                return Err(CliError::Usage(format!("unknown flag --{name}")));
            }
        } else {
            positionals.push(arg.clone());
        }
    }
    if positionals.len() != spec.positionals {
        return Err(CliError::Usage(format!(
            "expected {} expression argument(s); usage: {}",
            spec.positionals, spec.usage
        )));
    }
    Ok(ParsedArgs {
        values,
        switches,
        positionals,
        json,
    })
}

impl ParsedArgs {
    fn required(&self, name: &str, usage: &str) -> Result<&str, CliError> {
        self.values
            .get(name)
            .map(|s| s.as_str())
            .ok_or_else(|| CliError::Usage(format!("missing --{name}; usage: {usage}")))
    }

    fn expression<'a>(&'a self, index: usize, stdin_text: &'a str) -> Result<&'a str, CliError> {
        let raw = &self.positionals[index];
        if raw == "-" {
            if self.positionals.iter().filter(|p| p.as_str() == "-").count() > 1 {
                return Err(CliError::Usage("at most one argument may come from stdin".into()));
            }
            Ok(stdin_text)
        } else {
            Ok(raw)
        }
    }
}

fn parse_i64(text: &str, what: &str) -> Result<i64, CliError> {
    text.parse::<i64>()
        .map_err(|_| CliError::Usage(format!("{what} must be an integer, got `{text}`")))
}

fn parse_bounded(text: &str, what: &str, limit: i64) -> Result<i64, CliError> {
    let v = parse_i64(text, what)?;
    if v.abs() > limit {
        return Err(CliError::Usage(format!("{what} exceeds the supported limit {limit}")));
    }
    Ok(v)
}

fn parse_scalar(text: &str, what: &str) -> Result<GaussRational, CliError> {
    text.parse::<GaussRational>()
        .map_err(|_| CliError::Usage(format!("{what} must be a scalar literal, got `{text}`")))
}

/// Entry point shared by the binary and the tests. `stdin_text` replaces an
/// expression argument written as `-`.
pub fn run_command(
    args: &[String],
    stdin_text: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match dispatch(args, stdin_text) {
        Ok(output) => {
            let _ = out.write_all(output.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.render());
            e.exit_code()
        }
    }
}

fn usage_text() -> String {
    let mut lines = vec!["usage: weylharm [--json] <command> ...".to_string()];
    for spec in COMMANDS {
        lines.push(format!("  weylharm {}", spec.usage));
    }
    lines.push("an expression argument written as - is read from stdin".to_string());
    lines.push("exit codes: 0 success, 1 domain error, 2 syntax or usage error".to_string());
    lines.join("\n")
}

fn dispatch(args: &[String], stdin_text: &str) -> Result<String, CliError> {
    // --json is a global flag and may appear before or after the command.
    let json = args.iter().any(|a| a == "--json")
        || std::env::var("WEYLHARM_JSON").map(|v| v == "1").unwrap_or(false);
    let args: Vec<String> = args.iter().filter(|a| a.as_str() != "--json").cloned().collect();
    let command = args
        .first()
        .ok_or_else(|| CliError::Usage(usage_text()))?
        .clone();
    let spec = COMMANDS
        .iter()
        .find(|spec| spec.name == command)
        .ok_or_else(|| CliError::Usage(format!("unknown command `{command}`\n{}", usage_text())))?;
    let parsed = parse_args(spec, &args[1..], json)?;
    match spec.name {
        "normalize" => cmd_normalize(&parsed, stdin_text),
        "invariant" => cmd_invariant(&parsed, stdin_text),
        "factor" => cmd_factor(&parsed, stdin_text),
        "generators" => cmd_generators(&parsed, stdin_text),
        "reduce" => cmd_reduce(&parsed, stdin_text, spec.usage),
        "apply" => cmd_apply(&parsed, stdin_text),
        "project" => cmd_project(&parsed, stdin_text, spec.usage),
        "kernel" => cmd_kernel(&parsed, stdin_text, spec.usage),
        "order" => cmd_order(&parsed, stdin_text),
        "almansi" => cmd_almansi(&parsed, stdin_text),
        "cellular" => cmd_cellular(&parsed, stdin_text),
        "gamma-expand" => cmd_gamma_expand(&parsed, spec.usage),
        "gamma-coeffs" => cmd_gamma_coeffs(&parsed, stdin_text, spec.usage),
        "inner" => cmd_inner(&parsed, stdin_text),
        "obasis" => cmd_obasis(&parsed, spec.usage),
        _ => unreachable!(),
    }
}

fn render(json_mode: bool, value: Value, text: String) -> String {
    if json_mode {
        let mut s = value.to_string();
        s.push('\n');
        s
    } else {
        let mut text = text;
        if !text.ends_with('\n') {
            text.push('\n');
        }
        text
    }
}

fn cmd_normalize(args: &ParsedArgs, stdin: &str) -> Result<String, CliError> {
    let op = parse_op(args.expression(0, stdin)?)?;
    Ok(render(args.json, json!({ "op": op.to_string() }), op.to_string()))
}

fn cmd_invariant(args: &ParsedArgs, stdin: &str) -> Result<String, CliError> {
    let op = parse_op(args.expression(0, stdin)?)?;
    let flag = is_rotation_invariant(&op);
    Ok(render(args.json, json!({ "invariant": flag }), flag.to_string()))
}

fn cmd_factor(args: &ParsedArgs, stdin: &str) -> Result<String, CliError> {
    let op = parse_op(args.expression(0, stdin)?)?;
    if op.num_terms() != 1 {
        return Err(CliError::Domain(
            "factor expects a single canonical basis term".into(),
        ));
    }
    let (&(a1, b1, a2, b2), c) = op.terms().next().expect("one term");
    let word = factor_invariant_basis_element(a1, b1, a2, b2)?;
    let text = if c.is_one() {
        word.to_string()
    } else if c.is_real() || c.re().is_zero() {
        format!("{c} * {word}")
    } else {
        format!("({c}) * {word}")
    };
    let value = json!({
        "coefficient": c.to_string(),
        "radial": word.radial,
        "euler_z": word.euler_z,
        "euler_zb": word.euler_zb,
        "laplace": word.laplace,
    });
    Ok(render(args.json, value, text))
}

fn cmd_generators(args: &ParsedArgs, stdin: &str) -> Result<String, CliError> {
    let op = parse_op(args.expression(0, stdin)?)?;
    let expr = rewrite_in_generators(&op)?;
    Ok(render(
        args.json,
        json!({ "generators": expr.to_string() }),
        expr.to_string(),
    ))
}

fn cmd_reduce(args: &ParsedArgs, stdin: &str, usage: &str) -> Result<String, CliError> {
    let m = parse_bounded(args.required("m", usage)?, "--m", 1_000_000)?;
    let op = parse_op(args.expression(0, stdin)?)?;
    let reduced = lambda_m(&op, m)?;
    Ok(render(
        args.json,
        json!({ "m": m, "op": reduced.to_string() }),
        reduced.to_string(),
    ))
}

fn cmd_apply(args: &ParsedArgs, stdin: &str) -> Result<String, CliError> {
    let op = parse_op(args.expression(0, stdin)?)?;
    let poly = parse_poly(args.expression(1, stdin)?)?;
    let image = op.apply(&poly);
    Ok(render(args.json, json!({ "poly": image.to_string() }), image.to_string()))
}

fn cmd_project(args: &ParsedArgs, stdin: &str, usage: &str) -> Result<String, CliError> {
    let set_text = args.required("set", usage)?;
    let mut nodes = Vec::new();
    for part in set_text.split(',') {
        nodes.push(parse_bounded(part.trim(), "--set entry", 1_000_000)?);
    }
    if nodes.len() > 64 {
        return Err(CliError::Usage("--set supports at most 64 integers".into()));
    }
    let pick = parse_bounded(args.required("pick", usage)?, "--pick", 1_000_000)?;
    let poly = parse_poly(args.expression(0, stdin)?)?;
    let projector = projector_as_operator(&nodes, pick)?;
    let image = projector.apply(&poly);
    Ok(render(args.json, json!({ "poly": image.to_string() }), image.to_string()))
}

fn cmd_kernel(args: &ParsedArgs, stdin: &str, usage: &str) -> Result<String, CliError> {
    let max_deg = parse_bounded(args.required("max-deg", usage)?, "--max-deg", 24)?;
    if max_deg < 0 {
        return Err(CliError::Usage("--max-deg must be non-negative".into()));
    }
    let op = parse_op(args.expression(0, stdin)?)?;
    let basis = kernel_bounded(&op, max_deg as u32);
    let lines: Vec<String> = basis.iter().map(|p| p.to_string()).collect();
    let value = json!({ "dimension": basis.len(), "basis": lines });
    Ok(render(args.json, value, lines.join("\n")))
}

fn cmd_order(args: &ParsedArgs, stdin: &str) -> Result<String, CliError> {
    let poly = parse_poly(args.expression(0, stdin)?)?;
    let order = polyharmonic_order(&poly);
    Ok(render(args.json, json!({ "order": order }), order.to_string()))
}

fn cmd_almansi(args: &ParsedArgs, stdin: &str) -> Result<String, CliError> {
    let poly = parse_poly(args.expression(0, stdin)?)?;
    let decomposition = almansi_decompose(&poly)?;
    let layers: Vec<String> = decomposition.layers.iter().map(|q| q.to_string()).collect();
    let mut lines = vec![format!("order: {}", decomposition.layers.len())];
    for (j, q) in layers.iter().enumerate() {
        lines.push(format!("q{j} = {q}"));
    }
    let value = json!({ "order": decomposition.layers.len(), "layers": layers });
    Ok(render(args.json, value, lines.join("\n")))
}

fn cmd_cellular(args: &ParsedArgs, stdin: &str) -> Result<String, CliError> {
    let poly = parse_poly(args.expression(0, stdin)?)?;
    let decomposition = cellular_decompose(&poly)?;
    let layers: Vec<String> = decomposition.layers.iter().map(|w| w.to_string()).collect();
    let mut lines = vec![format!("order: {}", decomposition.order)];
    for (j, w) in layers.iter().enumerate() {
        lines.push(format!("w{j} = {w}"));
    }
    let mut coeff_entries = Vec::new();
    for (&(m, j), c) in &decomposition.coeffs {
        lines.push(format!("k[{m},{j}] = {c}"));
        coeff_entries.push(json!({ "m": m, "j": j, "c": c.to_string() }));
    }
    let value = json!({
        "order": decomposition.order,
        "layers": layers,
        "coeffs": coeff_entries,
    });
    Ok(render(args.json, value, lines.join("\n")))
}

fn parse_coeff_map(text: &str) -> Result<Vec<(i64, GaussRational)>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let (m_text, c_text) = part
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("coefficient entry `{part}` must be m:c")))?;
        let m = parse_bounded(m_text.trim(), "coefficient index", 10_000)?;
        let c = parse_scalar(c_text.trim(), "coefficient value")?;
        out.push((m, c));
    }
    Ok(out)
}

fn parse_gamma(args: &ParsedArgs, name: &str, usage: &str) -> Result<GaussRational, CliError> {
    let v = parse_scalar(args.required(name, usage)?, &format!("--{name}"))?;
    // Natural parameters drive series degrees; keep them bounded.
    if v.is_natural() && v.re() > &crate::scalar::Rational::from_integer(1000.into()) {
        return Err(CliError::Usage(format!("--{name} exceeds the supported limit 1000")));
    }
    Ok(v)
}

fn cmd_gamma_expand(args: &ParsedArgs, usage: &str) -> Result<String, CliError> {
    let g1 = parse_gamma(args, "g1", usage)?;
    let g2 = parse_gamma(args, "g2", usage)?;
    let mut coeffs = GammaHarmonicCoefficients::new(g1, g2);
    for (m, c) in parse_coeff_map(args.required("coeffs", usage)?)? {
        coeffs.set(m, c);
    }
    let poly = gamma_harmonic_from_coeffs(&coeffs)?;
    Ok(render(args.json, json!({ "poly": poly.to_string() }), poly.to_string()))
}

fn cmd_gamma_coeffs(args: &ParsedArgs, stdin: &str, usage: &str) -> Result<String, CliError> {
    let g1 = parse_gamma(args, "g1", usage)?;
    let g2 = parse_gamma(args, "g2", usage)?;
    let poly = parse_poly(args.expression(0, stdin)?)?;
    let coeffs = gamma_harmonic_to_coeffs(&poly, &g1, &g2)?;
    let mut lines = Vec::new();
    let mut entries = Vec::new();
    for (&m, c) in &coeffs.coeffs {
        lines.push(format!("{m}:{c}"));
        entries.push(json!({ "m": m, "c": c.to_string() }));
    }
    let value = json!({
        "g1": coeffs.gamma1.to_string(),
        "g2": coeffs.gamma2.to_string(),
        "coeffs": entries,
    });
    Ok(render(args.json, value, lines.join("\n")))
}

fn cmd_inner(args: &ParsedArgs, stdin: &str) -> Result<String, CliError> {
    let p = parse_poly(args.expression(0, stdin)?)?;
    let q = parse_poly(args.expression(1, stdin)?)?;
    if args.switches.iter().any(|s| s == "l2") {
        let value = l2_disc_inner_product(&p, &q);
        Ok(render(args.json, json!({ "inner": value.to_string() }), value.to_string()))
    } else {
        let value = module_inner_product(&p, &q);
        Ok(render(args.json, json!({ "inner": value.to_string() }), value.to_string()))
    }
}

fn cmd_obasis(args: &ParsedArgs, usage: &str) -> Result<String, CliError> {
    let m = parse_bounded(args.required("m", usage)?, "--m", 100_000)?;
    let n = parse_bounded(args.required("n", usage)?, "--n", 64)?;
    if m < 0 || n < 0 {
        return Err(CliError::Usage("--m and --n must be non-negative".into()));
    }
    let basis = o_basis(m as u32, n as u32);
    // Touch the change-of-basis table so inconsistencies surface here too.
    let _ = basis_change_recursive(m as u32, n as u32);
    let polys: Vec<String> = basis.polys.iter().map(|p| p.to_string()).collect();
    let lines: Vec<String> = polys
        .iter()
        .enumerate()
        .map(|(l, p)| format!("O{l} = {p}"))
        .collect();
    let value = json!({ "m": m, "n": n, "polys": polys });
    Ok(render(args.json, value, lines.join("\n")))
}

/// Convenience used by tests: run a command from string literals.
pub fn run_for_test(args: &[&str], stdin_text: &str) -> (i32, String, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_command(&args, stdin_text, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("stdout is utf-8"),
        String::from_utf8(err).expect("stderr is utf-8"),
    )
}
