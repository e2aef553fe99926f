fn main() {
    std::process::exit(amou_ktheory::harness::main_with_args(std::env::args_os()));
}
