//! Compiles every example into this test binary and runs its `main`.

trait Outcome {
    fn check(self);
}

impl Outcome for () {
    fn check(self) {}
}

impl<E: std::fmt::Debug> Outcome for Result<(), E> {
    fn check(self) {
        self.expect("example failed");
    }
}

macro_rules! example {
    ($name:ident, $file:literal) => {
        mod $name {
            #![allow(dead_code)]
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));

            #[test]
            fn runs() {
                use super::Outcome;
                main().check();
            }
        }
    };
}

example!(quadrature_areas, "quadrature_areas.rs");
example!(pullback_identities, "pullback_identities.rs");
example!(extremal_sharpness, "extremal_sharpness.rs");
example!(spectral_factors, "spectral_factors.rs");
example!(delta_l_ratios, "delta_l_ratios.rs");
example!(verify_summary, "verify_summary.rs");
