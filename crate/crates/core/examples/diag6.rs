use kzknot::braid::BraidWord;
use kzknot::horiz::close_with_stats;
use kzknot::kz::transport;
use kzknot::quotient::QuotientBases;

fn main() {
    let bases = QuotientBases::build(3);
    let b = BraidWord::parse("1 2", 3).unwrap();
    for endpoints in [vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 8.0], vec![1.0, 2.0, 30.0], vec![1.0, 1.2, 2.0]] {
        let r = transport(&b, &endpoints, 3, 1e-12).unwrap();
        let (closed, _) = close_with_stats(&r.value, &b).unwrap();
        let (concat, _) = bases.graded().concat_reduced(&closed).unwrap();
        let reduced: Vec<f64> = concat.iter().map(|c| c.re).collect();
        let class = bases.project(&closed).unwrap();
        println!("endpoints {:?}", endpoints);
        println!("  4T-reduced concat (re): {:?}", reduced.iter().map(|x| (x*1e6).round()/1e6).collect::<Vec<_>>());
        println!("  class deg3: {:?}", class.blocks[3].iter().map(|c| (c.re*1e6).round()/1e6).collect::<Vec<_>>());
    }
}
