use trx_core::algebra::MultiPoly;
use trx_core::expr::parse_ratfunc;
use std::time::Instant;

fn main() {
    let num = parse_ratfunc("835/59049*z1^10 + 11824/59049*z1^9 + 8807/6561*z1^8 + 111700/19683*z1^7 + 334444/19683*z1^6 + 250984/6561*z1^5 + 1312627/19683*z1^4 + 1775584/19683*z1^3 + 599180/6561*z1^2 + 3669388/59049*z1 + 1247038/59049").unwrap();
    let den = parse_ratfunc("z1^11 + 11*z1^10 + 55*z1^9 + 165*z1^8 + 330*z1^7 + 462*z1^6 + 462*z1^5 + 330*z1^4 + 165*z1^3 + 55*z1^2 + 11*z1 + 1").unwrap();
    let (a, b) = (num.num().clone(), den.num().clone());
    let t0 = Instant::now();
    for _ in 0..10 {
        let g = MultiPoly::gcd(&a, &b);
        assert!(g.is_one() || !g.is_one());
    }
    println!("10 gcds in {:?}", t0.elapsed());
}
