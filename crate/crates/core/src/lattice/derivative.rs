use super::{Field, Lattice};

/// Central difference `(f(x+e) - f(x-e)) / 2a` along lattice axis `axis`.
pub fn discrete_derivative(field: &Field, lattice: &Lattice, axis: usize) -> Field {
    let mut out = Field::zeros(lattice.sites(), field.ncomp);
    let inv = 0.5 / lattice.spacing;
    for site in 0..lattice.sites() {
        let up = field.at(lattice.shift(site, axis, 1));
        let dn = field.at(lattice.shift(site, axis, -1));
        for ((o, u), d) in out.at_mut(site).iter_mut().zip(up).zip(dn) {
            *o = (u - d) * inv;
        }
    }
    out
}

/// Central difference of one component at one site.
#[inline]
pub(crate) fn d_at(field: &Field, lattice: &Lattice, site: usize, axis: usize, comp: usize) -> f64 {
    let up = field.at(lattice.shift(site, axis, 1))[comp];
    let dn = field.at(lattice.shift(site, axis, -1))[comp];
    (up - dn) * (0.5 / lattice.spacing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_lattice;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn random_field(sites: usize, ncomp: usize, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Field {
            ncomp,
            data: (0..sites * ncomp).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        }
    }

    #[test]
    fn constant_field_has_zero_derivative() {
        let l = make_lattice(3, 5, 0.3).unwrap();
        let f = Field {
            ncomp: 2,
            data: vec![1.7; l.sites() * 2],
        };
        for axis in 0..3 {
            assert_eq!(discrete_derivative(&f, &l, axis).max_abs(), 0.0);
        }
    }

    #[test]
    fn single_mode_matches_closed_form() {
        let (n, a, k) = (12usize, 0.2, 2.0);
        let l = make_lattice(3, n, a).unwrap();
        let len = n as f64 * a;
        let mut f = Field::zeros(l.sites(), 1);
        for s in 0..l.sites() {
            let x = l.coord(s, 1) as f64 * a;
            f.data[s] = (TAU * k * x / len).sin();
        }
        let d = discrete_derivative(&f, &l, 1);
        for s in 0..l.sites() {
            let x = l.coord(s, 1) as f64 * a;
            let expect = ((TAU * k * (x + a) / len).sin() - (TAU * k * (x - a) / len).sin()) / (2.0 * a);
            assert!((d.data[s] - expect).abs() < 1e-12);
        }
        assert_eq!(discrete_derivative(&f, &l, 0).max_abs(), 0.0);
    }

    #[test]
    fn summation_by_parts_is_exact() {
        let l = make_lattice(4, 5, 0.7).unwrap();
        let f = random_field(l.sites(), 1, 1);
        let g = random_field(l.sites(), 1, 2);
        for axis in 0..4 {
            let df = discrete_derivative(&f, &l, axis);
            let dg = discrete_derivative(&g, &l, axis);
            let lhs: f64 = g.data.iter().zip(&df.data).map(|(x, y)| x * y).sum();
            let rhs: f64 = dg.data.iter().zip(&f.data).map(|(x, y)| x * y).sum();
            assert!((lhs + rhs).abs() < 1e-12, "{}", lhs + rhs);
        }
    }
}
