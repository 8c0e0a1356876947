fn main() {
    shadowable::cli::main()
}
