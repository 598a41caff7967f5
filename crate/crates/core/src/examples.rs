//! Built-in structures addressable by name.

use crate::error::{Error, Result};
use crate::rack::{
    from_group_likes, from_leibniz, from_pointed_rack, nc5, nc5_cocommutative, LeibnizAlgebra, RackBialgebra,
};
use crate::scalar::{Ring, Scalar};

pub struct Example {
    pub name: &'static str,
    pub description: &'static str,
}

pub const EXAMPLES: &[Example] = &[
    Example { name: "nc5", description: "five-dimensional non-cocommutative rack bialgebra, Δx = 1⊗x + x⊗1 + y⊗z" },
    Example { name: "nc5c0", description: "nc5 products with x primitive (cocommutative)" },
    Example { name: "trivial1", description: "one-element rack: k1 ⊕ kg with g◁g = g" },
    Example { name: "gg1", description: "k1 ⊕ kg with g◁g = 1 (not a set-level rack)" },
    Example { name: "conjZ2", description: "conjugation rack of Z/2 (trivial, e◁a = e, a◁e = a)" },
    Example { name: "abelian1", description: "k1 ⊕ 𝔥 for the one-dimensional abelian Leibniz algebra" },
    Example { name: "leibniz2", description: "k1 ⊕ 𝔥 for the Leibniz algebra [x,x] = y" },
    Example { name: "lie2", description: "k1 ⊕ 𝔤 for the nonabelian two-dimensional Lie algebra [x,y] = x" },
    Example { name: "sym2", description: "trivial rack on k1 ⊕ k², both generators primitive" },
];

fn names(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// The Leibniz algebra behind a registry entry, if it has one.
pub fn leibniz_example<R: Ring>(name: &str) -> Result<LeibnizAlgebra<R>> {
    match name {
        "abelian1" => LeibnizAlgebra::from_entries(names(&["x"]), &[]),
        "leibniz2" => LeibnizAlgebra::from_entries(names(&["x", "y"]), &[(0, 0, vec![(1, R::one())])]),
        "lie2" => LeibnizAlgebra::from_entries(
            names(&["x", "y"]),
            &[(0, 1, vec![(0, R::one())]), (1, 0, vec![(0, -R::one())])],
        ),
        "sym2" => LeibnizAlgebra::from_entries(names(&["x", "y"]), &[]),
        _ => Err(Error::UnknownExample(name.to_string())),
    }
}

pub fn example<R: Ring>(name: &str) -> Result<RackBialgebra<R>> {
    match name {
        "nc5" => Ok(nc5()),
        "nc5c0" => Ok(nc5_cocommutative()),
        "trivial1" => from_pointed_rack(&names(&["g"]), &[vec![0]]),
        "gg1" => from_group_likes(&names(&["g"]), &[vec![0]]),
        "conjZ2" => from_pointed_rack(&names(&["e", "a"]), &[vec![0, 0], vec![1, 1]]),
        "abelian1" | "leibniz2" | "lie2" | "sym2" => from_leibniz(&leibniz_example(name)?),
        _ => Err(Error::UnknownExample(name.to_string())),
    }
}

pub fn example_scalar(name: &str) -> Result<RackBialgebra<Scalar>> {
    example(name)
}
