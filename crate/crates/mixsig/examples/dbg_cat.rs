use mixsig::catalog::Catalog;
use mixsig::field::{EmbeddingSet, NumberFieldLattice};
use mixsig::real::Precision;

fn main() {
    let prec = Precision::default();
    let cat = Catalog::builtin();
    let f = cat.get("Q(sqrt5)").unwrap();
    let emb = EmbeddingSet::compute(f, &prec).unwrap();
    println!("real roots: {:?}", emb.real_roots().iter().map(|r| r.to_f64()).collect::<Vec<_>>());
    for i in 0..2 {
        let coords: Vec<rug::Rational> = f.integral_basis().row(i).to_vec();
        println!("basis row {i}: {:?}", coords);
        let v = emb.embed(f, &coords).unwrap();
        println!("embed: {:?}", v.chart().iter().map(|x| x.to_f64()).collect::<Vec<_>>());
    }
    match NumberFieldLattice::build(f, &prec) {
        Ok(_) => println!("built"),
        Err(e) => println!("err: {e}"),
    }
}
