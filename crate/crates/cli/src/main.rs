fn main() {
    println!("causalkit");
}
