use codeq::*;

fn main() {
    let c2 = codeq::corpus::c2().unwrap();
    let f = c2.field().clone();
    println!("C2 mindist = {:?}", c2.minimum_distance(1_000_000));
    println!("C2 size = {}", codeq::code::Code::size(&c2));
    // which triples are dependent?
    let g = c2.generator();
    for a in 0..8 {
        for b in (a + 1)..8 {
            for c in (b + 1)..8 {
                let cols = Mat::from_rows(
                    &f,
                    vec![g.mat().col_vec(a), g.mat().col_vec(b), g.mat().col_vec(c)],
                )
                .unwrap();
                if cols.rank() != 3 {
                    println!("dependent triple: {} {} {} rank {}", a, b, c, cols.rank());
                }
            }
        }
    }
    let pts = codeq::code::columns_as_points(g).unwrap();
    let basis = codeq::code::conic_space(&f, &pts);
    println!("conic space dim = {}", basis.len());
    for b in &basis {
        let coeffs: Vec<String> = b.coeffs().iter().map(|&x| f.format_element(x)).collect();
        println!("  form: {:?}", coeffs);
    }
    // e powers
    for k in 0..9u64 {
        let v = f.pow(f.e(), k);
        println!("e^{k} = {:?} coeffs {:?}", f.format_element(v), f.coeffs(v));
    }
}
