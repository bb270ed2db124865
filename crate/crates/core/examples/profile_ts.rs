use trx_core::curve::catalog;
use trx_core::recursion::CorrelatorTable;
use std::time::Instant;

fn main() {
    let mut t = CorrelatorTable::new(catalog("two-sided").unwrap()).swapped().unwrap();
    for (g, n) in [(0u32, 2u32), (1, 1), (0, 3), (1, 2), (2, 1)] {
        let t0 = Instant::now();
        let w = t.correlator(g, n).unwrap();
        println!("({g},{n}) in {:?}: {} num terms / {} den terms", t0.elapsed(), w.num().num_terms(), w.den().num_terms());
    }
    let mut t2 = CorrelatorTable::new(catalog("two-sided").unwrap());
    let t0 = Instant::now();
    for (g, n) in [(0u32, 3u32), (1, 1), (1, 2), (2, 1), (0, 4)] {
        t2.correlator(g, n).unwrap();
    }
    println!("forward two-sided tower in {:?}", t0.elapsed());
    let mut t3 = CorrelatorTable::new(catalog("gaussian").unwrap());
    let t0 = Instant::now();
    for (g, n) in [(0u32, 3u32), (1, 1), (1, 2), (2, 1)] {
        t3.correlator(g, n).unwrap();
    }
    println!("gaussian tower in {:?}", t0.elapsed());
}
