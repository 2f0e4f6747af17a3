fn main() {
    std::process::exit(linkprop::cli_main());
}
