// scratch diagnostic: which closure-order/relabel conventions make the
// trace identity hold exhaustively?
use kzknot::braid::{BraidWord, Permutation};
use kzknot::circle::CircleDiagram;
use kzknot::horiz::{BraidElement, HorizontalDiagram};
use kzknot::scalar::Rational;
use kzknot::exact::ratio;

fn close_variant(word: &HorizontalDiagram, braid: &BraidWord, use_inverse: bool) -> CircleDiagram {
    let perm = if use_inverse { braid.permutation().inverse() } else { braid.permutation() };
    let n = braid.strand_count();
    let mut order = Vec::new();
    let mut s = 0usize;
    for _ in 0..n { order.push(s); s = perm.image(s); }
    let mut label: std::collections::BTreeMap<(usize,usize),usize> = Default::default();
    let mut next = 0;
    for &st in &order {
        for (h, &(a,b)) in word.pairs().iter().enumerate() {
            if a==st || b==st { label.insert((st,h), next); next+=1; }
        }
    }
    let chords: Vec<(usize,usize)> = word.pairs().iter().enumerate().map(|(h,&(a,b))| {
        let x = label[&(a,h)]; let y = label[&(b,h)];
        (x.min(y), x.max(y))
    }).collect();
    CircleDiagram::from_chords(chords).unwrap()
}

fn words_of_degree(n: usize, d: usize) -> Vec<HorizontalDiagram> {
    let mut pairs = Vec::new();
    for i in 0..n { for j in (i+1)..n { pairs.push((i,j)); } }
    let mut out = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::new();
        for w in &out { for &p in &pairs { let mut w2 = w.clone(); w2.push(p); next.push(w2); } }
        out = next;
    }
    out.into_iter().map(HorizontalDiagram::from_pairs).collect()
}

fn braids(n: usize, maxlen: usize) -> Vec<BraidWord> {
    let gens: Vec<i64> = (1..n as i64).flat_map(|i| [i, -i]).collect();
    let mut out = vec![vec![]];
    let mut all = vec![vec![]];
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for w in &out { for &g in &gens { let mut w2 = w.clone(); w2.push(g); next.push(w2); } }
        all.extend(next.clone());
        out = next;
    }
    all.into_iter().map(|w| {
        let text: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        BraidWord::parse(&text.join(" "), n).unwrap()
    }).collect()
}

fn main() {
    // trace identity: close(w1 · relabel(w2), b1b2) == close(w2 · relabel(w1), b2b1)
    // try: closure order via pi or pi^{-1}; relabel via pi^{-1} or pi
    for use_inv_close in [false, true] {
        for relabel_inv in [false, true] {
            let mut fails = 0usize; let mut total = 0usize;
            'outer:
            for n in [2usize, 3] {
                for b1 in braids(n, 2) {
                    for b2 in braids(n, 2) {
                        let b12 = b1.concat(&b2).unwrap();
                        if b12.closure_components() != 1 { continue; }
                        let b21 = b2.concat(&b1).unwrap();
                        let p1 = b1.permutation(); let p2 = b2.permutation();
                        let r1 = if relabel_inv { p1.inverse() } else { p1.clone() };
                        let r2 = if relabel_inv { p2.inverse() } else { p2.clone() };
                        for d1 in 0..=2usize { for d2 in 0..=(2-d1) {
                            for w1 in words_of_degree(n, d1) {
                                for w2 in words_of_degree(n, d2) {
                                    let lhs_word = w1.stacked(&w2.relabeled(&r1));
                                    let rhs_word = w2.stacked(&w1.relabeled(&r2));
                                    let lhs = close_variant(&lhs_word, &b12, use_inv_close);
                                    let rhs = close_variant(&rhs_word, &b21, use_inv_close);
                                    total += 1;
                                    if lhs != rhs { fails += 1; if fails > 3 { break 'outer; } }
                                }
                            }
                        }}
                    }
                }
            }
            println!("close_inv={use_inv_close} relabel_inv={relabel_inv}: {fails} fails / {total}");
        }
    }
}
