//! Acceptance suite: one PASS/FAIL line per criterion, each built from
//! named sub-checks so a failure says exactly what broke.
//!
//! Criterion 10 asks that the perturbation Δx += ε·y⊗y be flagged. It is a
//! valid first-order deformation (the order-ε coassociator cancels and every
//! new morphism term involves y◁y = 0 or 1◁y = ε(y)1 = 0), so that sub-check
//! prints FAIL. `acceptance_criteria` asserts every other sub-check;
//! `y_tensor_y_is_flagged` keeps the original assertion and is ignored.

use std::io::Write;
use std::time::Instant;

use rackkit::cohomology::{check_embedding_chain_map, first_order_deformation_check, loday_betti, DeformationComplex};
use rackkit::enveloping::{t_mul, universal_morphism, TruncatedEnveloping};
use rackkit::examples::{example_scalar, leibniz_example, EXAMPLES};
use rackkit::hopf::{cyclic_group_algebra, polynomial_hopf_k3, polynomial_primitive, rack_from_hopf};
use rackkit::linalg::SparseVec;
use rackkit::scalar::{Ring, Scalar};
use rackkit::yd::YdRackStructure;

/// Sub-checks known to fail for a documented mathematical reason.
const UNATTAINABLE: &[(usize, &str)] = &[(10, "y⊗y perturbation flagged")];

struct Criterion {
    id: usize,
    title: &'static str,
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn new(id: usize, title: &'static str) -> Self {
        Criterion { id, title, checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn cocommutative_examples() -> Vec<&'static str> {
    EXAMPLES
        .iter()
        .map(|e| e.name)
        .filter(|n| example_scalar(n).unwrap().coalgebra().is_cocommutative())
        .collect()
}

fn c1_nc5() -> Criterion {
    let mut c = Criterion::new(1, "nc5 satisfies the five axioms and is not cocommutative");
    let start = Instant::now();
    let r = example_scalar("nc5").unwrap();
    let rep = r.check();
    let cocom = r.coalgebra().is_cocommutative();
    let elapsed = start.elapsed();
    for (name, v) in rep.verdicts() {
        c.check(format!("axiom {name}"), v.holds && v.checked > 0);
    }
    c.check("not cocommutative", !cocom);
    c.check(format!("runtime {elapsed:?} < 1s"), elapsed.as_secs_f64() < 1.0);
    c
}

fn c2_nc5_yd() -> Criterion {
    let mut c = Criterion::new(2, "nc5 is a YD rack over k[X,Y,Z] with q = (X, Y, Z, 0)");
    let r = example_scalar("nc5").unwrap();
    let h = polynomial_hopf_k3(3).unwrap();
    let b = |l: &str| h.basis(h.index_of(l).unwrap());
    let images = vec![b("1"), b("X"), b("Y"), b("Z"), SparseVec::zero(h.dim())];
    match YdRackStructure::derived_from_images(r, h.clone(), images).and_then(|s| s.check()) {
        Ok(rep) => {
            for (name, v) in rep.verdicts() {
                c.check(name, v.holds && v.checked > 0);
            }
        }
        Err(e) => c.check(format!("construction: {e}"), false),
    }
    c
}

fn c3_series() -> Criterion {
    let mut c = Criterion::new(3, "enveloping dimension series at degree 4, slack 2");
    let cases: [(&str, [usize; 5]); 5] = [
        ("trivial1", [1, 2, 3, 4, 5]),
        ("gg1", [1, 2, 2, 2, 2]),
        ("leibniz2", [1, 2, 3, 4, 5]),
        ("sym2", [1, 3, 6, 10, 15]),
        ("lie2", [1, 3, 6, 10, 15]),
    ];
    for (name, want) in cases {
        let u = TruncatedEnveloping::build(&example_scalar(name).unwrap(), 4, 2).unwrap();
        c.check(format!("{name} series {:?}", u.hilbert_series()), u.hilbert_series() == want);
        c.check(format!("{name} stabilized"), u.stabilized());
    }
    let u = TruncatedEnveloping::build(&example_scalar("gg1").unwrap(), 4, 2).unwrap();
    let g = u.i_of(1);
    c.check("gg1: g·g = g", u.nf(&t_mul(&g, &g)).unwrap() == u.nf(&g).unwrap());
    let u = TruncatedEnveloping::build(&example_scalar("leibniz2").unwrap(), 4, 2).unwrap();
    c.check("leibniz2: y ∈ J", u.in_ideal(&u.i_of(2)).unwrap());
    c
}

fn c4_coideal() -> Criterion {
    let mut c = Criterion::new(4, "J is a coideal and U is a cocommutative bialgebra in truncation");
    for name in cocommutative_examples() {
        let r = example_scalar(name).unwrap();
        for d in 1..=4 {
            let u = TruncatedEnveloping::build(&r, d, 2).unwrap();
            c.check(format!("{name} d={d} coideal"), u.coideal().holds());
            let h = u.bialgebra();
            let rep = h.check();
            c.check(format!("{name} d={d} coassociative"), h.has_coproduct() && rep.coassociativity.holds);
            c.check(format!("{name} d={d} cocommutative"), h.is_cocommutative());
        }
    }
    c
}

fn c5_action() -> Criterion {
    let mut c = Criterion::new(5, "every generator of J acts as zero on C");
    for e in EXAMPLES {
        let u = TruncatedEnveloping::build(&example_scalar(e.name).unwrap(), 4, 2).unwrap();
        let rep = u.check_action();
        if u.generators().is_empty() {
            // J = 0: U is the free algebra on one letter, nothing to act
            let free: Vec<usize> = (0..=4).map(|k| k + 1).collect();
            c.check(format!("{} has J = 0", e.name), u.hilbert_series() == free.as_slice());
        } else {
            c.check(format!("{} generators", e.name), rep.generators.holds && rep.generators.checked > 0);
        }
        c.check(format!("{} truncated ideal", e.name), rep.truncated_ideal.holds);
    }
    c
}

fn c6_universal() -> Criterion {
    let mut c = Criterion::new(6, "universal property of U(C)");
    let r = example_scalar("conjZ2").unwrap();
    let h = cyclic_group_algebra(2).unwrap();
    let target = YdRackStructure::derived_from_images(r.clone(), h.clone(), vec![h.basis(0), h.basis(0), h.basis(1)]).unwrap();
    for d in 1..=3 {
        let u = TruncatedEnveloping::build(&r, d, 2).unwrap();
        match universal_morphism(&u, &target) {
            Ok(m) => {
                let rep = &m.report;
                c.check(format!("conjZ2 d={d} u∘q = q_H"), rep.u_q.holds && rep.u_q.checked > 0);
                c.check(format!("conjZ2 d={d} multiplicative"), rep.multiplicative.holds);
                c.check(format!("conjZ2 d={d} comultiplicative"), rep.comultiplicative.holds);
                c.check(format!("conjZ2 d={d} equivariant"), rep.equivariance.holds && rep.equivariance.checked > 0);
            }
            Err(e) => c.check(format!("conjZ2 d={d}: {e}"), false),
        }
    }
    for d in 0..=3usize {
        let h = polynomial_primitive(&["x"], (2 * d).max(4)).unwrap();
        let hr = rack_from_hopf(&h, &[h.basis(1), h.basis(2)]).unwrap();
        let target = YdRackStructure::derived(hr.rack.clone(), h.clone(), hr.inclusion.clone()).unwrap();
        let u = TruncatedEnveloping::build(&hr.rack, d, 2).unwrap();
        let m = universal_morphism(&u, &target).unwrap();
        let k = m.kernel_dim_below_degree(&h, d);
        c.check(format!("F2 d={d} kernel {k} = binom(d+2,2) − (d+1)"), k == binom(d + 2, 2) - (d + 1));
        c.check(format!("F2 d={d} report"), m.report.all_hold());
    }
    c
}

fn c7_lm() -> Criterion {
    let mut c = Criterion::new(7, "f(s⊗c) = s·q(c) is bilinear and a coderivation at degree 2");
    for name in ["abelian1", "leibniz2", "lie2", "trivial1", "conjZ2"] {
        let u = TruncatedEnveloping::build(&example_scalar(name).unwrap(), 2, 2).unwrap();
        match u.lm_bialgebra_object() {
            Ok((_, rep)) => {
                c.check(format!("{name} bilinear"), rep.f_bilinear.holds && rep.f_bilinear.checked > 0);
                c.check(format!("{name} coderivation"), rep.f_coderivation.holds && rep.f_coderivation.checked > 0);
                c.check(format!("{name} tetramodule"), rep.all_hold());
            }
            Err(e) => c.check(format!("{name}: {e}"), false),
        }
    }
    c
}

fn c8_complex() -> Criterion {
    let mut c = Criterion::new(8, "d maps coderivations to coderivations and d∘d = 0");
    for name in ["abelian1", "leibniz2", "lie2", "conjZ2"] {
        let cx = DeformationComplex::new(example_scalar(name).unwrap()).unwrap();
        for n in 1..=2 {
            c.check(format!("{name} d^{n} lands in coderivations"), cx.differential(n).is_ok());
        }
        c.check(format!("{name} d²∘d¹ = 0"), cx.d_squared_zero(2).unwrap_or(false));
    }
    c
}

fn c9_embedding() -> Criterion {
    let mut c = Criterion::new(9, "Loday cochains embed as a chain map");
    for name in ["leibniz2", "lie2"] {
        let l = leibniz_example::<Scalar>(name).unwrap();
        for n in 1..=2 {
            let rep = check_embedding_chain_map(&l, n).unwrap();
            c.check(format!("{name} n={n} coderivations"), rep.coderivations.holds);
            c.check(format!("{name} n={n} injective"), rep.injective);
            c.check(format!("{name} n={n} chain map"), rep.chain_map.holds);
        }
    }
    let b = loday_betti(&leibniz_example::<Scalar>("abelian1").unwrap(), 3).unwrap();
    c.check(format!("abelian1 Loday Betti {b:?}"), b == [1, 1, 1]);
    c
}

fn perturbation(from: usize, left: usize, right: usize) -> Vec<SparseVec<Scalar>> {
    let mut d = vec![SparseVec::zero(25); 5];
    d[from].add_term(left * 5 + right, Scalar::one());
    d
}

fn y_tensor_y_flagged() -> bool {
    let c0 = example_scalar("nc5c0").unwrap();
    let (_, rep) = first_order_deformation_check(&c0, &perturbation(1, 2, 2), &vec![SparseVec::zero(5); 25]).unwrap();
    !rep.all_hold()
}

fn c10_deformation() -> Criterion {
    let mut c = Criterion::new(10, "first-order deformation of C₀ by ω(x) = y⊗z");
    let c0 = example_scalar("nc5c0").unwrap();
    let nc5 = example_scalar("nc5").unwrap();
    let (r, rep) = first_order_deformation_check(&c0, &perturbation(1, 2, 3), &vec![SparseVec::zero(5); 25]).unwrap();
    c.check("y⊗z passes every axiom", rep.all_hold());
    let at_one = r.map_ring(|x| x.value.clone() + x.infinitesimal.clone());
    let same = (0..5).all(|k| at_one.coalgebra().comul(k) == nc5.coalgebra().comul(k))
        && at_one.rack_entries() == nc5.rack_entries();
    c.check("ε = 1 reproduces nc5", same);
    c.check(UNATTAINABLE[0].1, y_tensor_y_flagged());
    c
}

#[test]
fn acceptance_criteria() {
    let criteria = [
        c1_nc5(),
        c2_nc5_yd(),
        c3_series(),
        c4_coideal(),
        c5_action(),
        c6_universal(),
        c7_lm(),
        c8_complex(),
        c9_embedding(),
        c10_deformation(),
    ];
    let mut report = String::from("\n");
    let mut unexpected = Vec::new();
    for c in &criteria {
        report += &format!("{} {:>2} {}\n", if c.passed() { "PASS" } else { "FAIL" }, c.id, c.title);
        for (name, _) in c.checks.iter().filter(|(_, ok)| !ok) {
            let known = UNATTAINABLE.contains(&(c.id, name.as_str()));
            report += &format!("       FAIL {name}{}\n", if known { " (known, see README)" } else { "" });
            if !known {
                unexpected.push(format!("{}: {name}", c.id));
            }
        }
    }
    // the test harness captures print!; the summary should show on every run
    let mut out = std::io::stdout().lock();
    out.write_all(report.as_bytes()).and_then(|_| out.flush()).expect("write report");
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
}

#[test]
#[ignore = "y⊗y is a valid first-order deformation of C₀; no axiom fails at order ε"]
fn y_tensor_y_is_flagged() {
    assert!(y_tensor_y_flagged());
}
