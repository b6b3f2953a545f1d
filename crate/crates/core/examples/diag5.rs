use kzknot::quotient::{generate_4t, QuotientBases};
use kzknot::circle::enumerate_diagrams;
use kzknot::scalar::rational_to_f64;

fn main() {
    println!("degree-3 diagrams:");
    for (i, d) in enumerate_diagrams(3).iter().enumerate() {
        println!("  D{i}: {}", d.code());
    }
    println!("degree-3 4T relation vectors:");
    for v in generate_4t(3) {
        println!("  {:?}", v.iter().map(rational_to_f64).collect::<Vec<_>>());
    }
    let bases = QuotientBases::build(3);
    println!("4T RREF rows at degree 3 (pivots {:?}):",
        bases.graded().degree(3).relations().pivots());
    for r in bases.graded().degree(3).relations().rows() {
        println!("  {:?}", r.iter().map(rational_to_f64).collect::<Vec<_>>());
    }
    println!("free columns at deg3: {:?}", bases.graded().degree(3).free_columns());
    println!("concat offsets: {:?}", bases.graded().offsets());
    println!("ideal rank {} pivots {:?}", bases.ideal().rank(), bases.ideal().basis().pivots());
    for r in bases.ideal().basis().rows() {
        println!("  {:?}", r.iter().map(rational_to_f64).collect::<Vec<_>>());
    }
}
