//! Fixed instances shared by the criterion benches.

use std::sync::Arc;

use monocount::counting::sample::random_form;
use monocount::{build_field, MonomialForm};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub name: &'static str,
    pub form: MonomialForm,
}

fn diagonal(name: &'static str, p: u64, e: u32, s: usize, m: u64) -> Fixture {
    let field = Arc::new(build_field(p, e).unwrap());
    Fixture {
        name,
        form: MonomialForm::diagonal(field, s, m).unwrap(),
    }
}

fn random(name: &'static str, p: u64, e: u32, s: usize, r: usize, seed: u64) -> Fixture {
    let field = Arc::new(build_field(p, e).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_exp = field.q() as u64 + 1;
    Fixture {
        name,
        form: random_form(field, s, r, max_exp, &mut rng).unwrap(),
    }
}

/// Instances small enough for brute force, in increasing size.
pub fn fixtures() -> Vec<Fixture> {
    vec![
        diagonal("f13_s1_cube", 13, 1, 1, 3),
        random("f16_s3_r3", 2, 4, 3, 3, 1),
        diagonal("f11_s4_square", 11, 1, 4, 2),
        random("f31_s3_r4", 31, 1, 3, 4, 2),
        diagonal("f11_s6_square", 11, 1, 6, 2),
    ]
}
