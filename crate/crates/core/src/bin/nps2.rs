fn main() {
    let env_seed = std::env::var(nps2::cli::SEED_ENV).ok();
    let code = nps2::cli::main_with(
        std::env::args_os(),
        env_seed.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
