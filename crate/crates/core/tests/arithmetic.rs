use darboux_core::{enc_add, enc_mul, enc_scale, rat, Enclosure, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=24).prop_map(|(p, q)| rat(p, q))
}

/// An enclosure and a point inside it.
fn enclosure_with_point() -> impl Strategy<Value = (Enclosure, Rational)> {
    (rational(), rational(), 0u32..=8, any::<bool>()).prop_map(|(a, b, k, tight)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let x = &lo + &((&hi - &lo) * rat(k as i64, 8));
        (Enclosure::new(lo, hi, tight), x)
    })
}

fn widen(e: &Enclosure, by: &Rational) -> Enclosure {
    Enclosure::new(e.lo() - by, e.hi() + by, false)
}

proptest! {
    #[test]
    fn operations_contain_pointwise_results(
        (x, px) in enclosure_with_point(),
        (y, py) in enclosure_with_point(),
        c in rational(),
    ) {
        prop_assert!(enc_add(&x, &y).contains(&(&px + &py)));
        prop_assert!(enc_mul(&x, &y).contains(&(&px * &py)));
        prop_assert!(enc_scale(&c, &x).contains(&(&c * &px)));
        prop_assert!(x.neg().contains(&-&px));
    }

    #[test]
    fn operations_are_inclusion_monotone(
        (x, _) in enclosure_with_point(),
        (y, _) in enclosure_with_point(),
        d in (0i64..=5, 1i64..=4).prop_map(|(p, q)| rat(p, q)),
        c in rational(),
    ) {
        let wx = widen(&x, &d);
        let wy = widen(&y, &d);
        prop_assert!(enc_add(&wx, &wy).contains_enclosure(&enc_add(&x, &y)));
        prop_assert!(enc_mul(&wx, &wy).contains_enclosure(&enc_mul(&x, &y)));
        prop_assert!(enc_scale(&c, &wx).contains_enclosure(&enc_scale(&c, &x)));
    }

    #[test]
    fn tightness_is_conservative((x, _) in enclosure_with_point(), p in rational()) {
        let pt = Enclosure::point(p.clone());
        // adding an exact constant shifts the bounds, so tightness survives
        prop_assert_eq!(enc_add(&x, &pt).is_tight(), x.is_tight());
        let y = Enclosure::new(p.clone(), &p + &rat(1, 1), true);
        if !x.is_degenerate() {
            prop_assert!(!enc_add(&x, &y).is_tight());
        }
    }

    #[test]
    fn hull_and_intersection((x, px) in enclosure_with_point(), (y, py) in enclosure_with_point()) {
        let h = x.hull(&y);
        prop_assert!(h.contains(&px) && h.contains(&py));
        match x.intersect(&y) {
            Some(i) => {
                prop_assert!(x.contains_enclosure(&i) && y.contains_enclosure(&i));
                prop_assert!(x.intersects(&y));
            }
            None => prop_assert!(!x.intersects(&y)),
        }
    }
}

/// `p/q` as a reduced `i128` pair, the independent oracle for the checks below.
fn reduce(p: i128, q: i128) -> (i128, i128) {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(p, q).max(1);
    let s = if q < 0 { -1 } else { 1 };
    (s * p / g, s * q / g)
}

fn as_pair(r: &Rational) -> (i128, i128) {
    let p: i128 = r.numer().try_into().unwrap();
    let q: i128 = r.denom().try_into().unwrap();
    (p, q)
}

#[test]
fn ten_thousand_exact_operations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let (a, b) = (
            rng.random_range(-999i128..=999),
            rng.random_range(1i128..=999),
        );
        let (c, d) = (
            rng.random_range(-999i128..=999),
            rng.random_range(1i128..=999),
        );
        let x = Rational::new(a as i64, b as i64);
        let y = Rational::new(c as i64, d as i64);
        assert_eq!(as_pair(&(&x + &y)), reduce(a * d + c * b, b * d));
        assert_eq!(as_pair(&(&x - &y)), reduce(a * d - c * b, b * d));
        assert_eq!(as_pair(&(&x * &y)), reduce(a * c, b * d));
        if c != 0 {
            assert_eq!(as_pair(&(&x / &y)), reduce(a * d, b * c));
        }
        assert_eq!(x < y, a * d < c * b);
        let text = x.to_string();
        assert_eq!(text.parse::<Rational>().unwrap(), x);
    }
}
