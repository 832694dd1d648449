use std::io::Read;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let stdin_text = if args.iter().any(|a| a == "-") {
        let mut buf = String::new();
        if std::io::stdin().read_to_string(&mut buf).is_err() {
            eprintln!("error:usage:could not read stdin");
            std::process::exit(2);
        }
        buf
    } else {
        String::new()
    };
    let code = weylharm::cli::run_command(
        &args,
        &stdin_text,
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
