use kzknot::braid::BraidWord;
use kzknot::horiz::close_with_stats;
use kzknot::kz::transport_default;
use kzknot::quotient::QuotientBases;

fn main() {
    let bases = QuotientBases::build(3);
    for text in ["1", "1 2"] {
        let n = if text == "1" { 2 } else { 3 };
        let b = BraidWord::parse(text, n).unwrap();
        let r = transport_default(&b, 3, 1e-12).unwrap();
        let (closed, _) = close_with_stats(&r.value, &b).unwrap();
        println!("== braid '{text}' pZ raw terms:");
        for (d, c) in closed.terms() {
            println!("   {d}  {:.12}  {:+.12}i", c.re, c.im);
        }
        let class = bases.project(&closed).unwrap();
        println!("   class: {:?}", class.blocks.iter().map(|b| b.iter().map(|c| c.re).collect::<Vec<_>>()).collect::<Vec<_>>());
    }
}
