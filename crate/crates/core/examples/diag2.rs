use kzknot::braid::BraidWord;
use kzknot::invariant::{compute_y, compute_y_exact_two_strand};
use kzknot::quotient::QuotientBases;

fn main() {
    let bases = QuotientBases::build(3);
    let b = BraidWord::parse("1 1 1", 2).unwrap();
    let s = BraidWord::parse("1 1 1 2", 3).unwrap();
    let y1 = compute_y(&b, None, 1e-10, &bases).unwrap();
    let y2 = compute_y(&s, None, 1e-10, &bases).unwrap();
    let ye = compute_y_exact_two_strand(3, &bases).unwrap();
    for m in 0..=3 {
        println!("deg {m}:");
        println!("  trefoil 2s: {:?}  bound {:.2e}", y1.degree_coordinates(m), y1.bounds()[m]);
        println!("  stab    3s: {:?}  bound {:.2e}", y2.degree_coordinates(m), y2.bounds()[m]);
        println!("  exact     : {:?}", ye.degree_coordinates(m).iter().map(kzknot::scalar::rational_to_f64).collect::<Vec<_>>());
    }
}
