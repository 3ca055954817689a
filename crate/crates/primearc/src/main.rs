fn main() {
    println!("primearc");
}
