use kzknot::braid::BraidWord;
use kzknot::kz::transport_default;

fn main() {
    let b = BraidWord::parse("1 2", 3).unwrap();
    let r = transport_default(&b, 2, 1e-12).unwrap();
    println!("transport words for '1 2' (degree <= 2):");
    for (w, c) in r.value.terms() {
        println!("  [{}]  {:+.9} {:+.9}i", w.code(), c.re, c.im);
    }
}
