//! Randomized properties: branch conditions of the conformal maps and
//! lossless round-trips of the decimal serialization.

use diffortho::asymptotics::conformal_maps;
use diffortho::polycore::Case;
use diffortho::scalar::{c_to_dec, cabs, to_dec, Prec};
use proptest::prelude::*;

fn p() -> Prec {
    Prec::new(192)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_modulus_exceeds_one_off_support(re in -4.0f64..4.0, im in 0.2f64..3.0) {
        let z = p().c(re, im);
        let m = conformal_maps(&Case::Hermite, &z).unwrap();
        prop_assert!(cabs(&m.phi) > p().one());
        prop_assert!(m.capital_psi > p().one());
        prop_assert!(m.nth_root_limit.is_sign_positive());
    }

    #[test]
    fn psi_modulus_exceeds_one_off_support(re in -4.0f64..4.0, im in 0.2f64..3.0) {
        let z = p().c(re, im);
        let case = Case::laguerre(p().zero()).unwrap();
        let m = conformal_maps(&case, &z).unwrap();
        prop_assert!(cabs(&m.psi) > p().one());
        prop_assert!(m.nth_root_limit.is_sign_positive());
    }

    #[test]
    fn conformal_maps_commute_with_conjugation(re in -4.0f64..4.0, im in 0.2f64..3.0) {
        for case in [Case::Hermite, Case::laguerre(p().zero()).unwrap()] {
            let a = conformal_maps(&case, &p().c(re, im)).unwrap();
            let b = conformal_maps(&case, &p().c(re, -im)).unwrap();
            let d = a.phi.clone() - b.phi.clone().conj();
            prop_assert!(cabs(&d) <= p().tol(20) * cabs(&a.phi));
            let d = a.psi.clone() - b.psi.clone().conj();
            prop_assert!(cabs(&d) <= p().tol(20) * cabs(&a.psi));
            prop_assert!((a.capital_psi.clone() - &b.capital_psi).abs()
                <= p().tol(20) * a.capital_psi.clone());
        }
    }

    #[test]
    fn decimal_strings_round_trip(v in -1e12f64..1e12) {
        let x = p().f(v);
        let back = p().parse(&to_dec(&x)).unwrap();
        prop_assert_eq!(&back, &x);
    }

    #[test]
    fn complex_decimal_strings_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let z = p().c(re, im);
        let back = p().parse_complex(&c_to_dec(&z)).unwrap();
        prop_assert_eq!(back.real(), z.real());
        prop_assert_eq!(back.imag(), z.imag());
    }
}
