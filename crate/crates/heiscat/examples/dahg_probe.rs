use heiscat::frobenius::builtin;
use heiscat::wreath::{multiply, WreathElement, tensor_parity, dim_a_n, term_unindex};
use heiscat::dahg::{DmElement, dm_multiply, chi_prime};
use heiscat::coeff::Rat;
use num::One;

fn parity(alg: &heiscat::frobenius::FrobeniusAlgebra, a: &DmElement) -> usize {
    // assumes homogeneous
    let mut p = None;
    for ((e, u), _) in &a.terms {
        let t: usize = e.iter().sum();
        let q = (alg.sigma as usize * t + tensor_parity(alg, &u.0) as usize) % 2;
        assert!(p.is_none() || p == Some(q));
        p = Some(q);
    }
    p.unwrap_or(0)
}

fn main() {
    for name in ["exterior_line", "clifford"] {
        let alg = builtin(name).unwrap();
        let m = 2usize; let n = 2usize;
        let mut atoms: Vec<(String, DmElement)> = vec![
            ("x1".into(), DmElement::x(&alg, m, 1)),
            ("x2".into(), DmElement::x(&alg, m, 2)),
            ("s1".into(), DmElement::s(&alg, m, 1)),
        ];
        for k in 0..dim_a_n(&alg, m) {
            let t = term_unindex(&alg, m, k);
            let mut e = DmElement::zero(m);
            e.add_term_pub((vec![0; m], t), Rat::one());
            atoms.push((format!("u{k}"), e));
        }
        println!("== {name}");
        for (na, a) in &atoms {
            for (nb, b) in &atoms {
                let ab = dm_multiply(&alg, a, b).unwrap();
                let lhs = chi_prime(&alg, m, n, &ab).unwrap();
                let sgn = if parity(&alg, a) * parity(&alg, b) == 1 { -Rat::one() } else { Rat::one() };
                let rhs = multiply(&alg, &chi_prime(&alg, m, n, b).unwrap(), &chi_prime(&alg, m, n, a).unwrap()).scale(&sgn);
                if lhs != rhs { println!("  MISMATCH {na}*{nb}"); }
            }
        }
    }
}
