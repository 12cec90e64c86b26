fn main() {
    std::process::exit(gt_davis::cli::run(std::env::args_os()));
}
