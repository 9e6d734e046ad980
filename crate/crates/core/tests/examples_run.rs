//! Every example runs to completion and its assertions hold.

macro_rules! example {
    ($name:ident, $path:literal) => {
        #[test]
        fn $name() {
            #[path = $path]
            mod inner;
            inner::main();
        }
    };
}

example!(padic_arithmetic, "../examples/padic_arithmetic.rs");
example!(difference_identities, "../examples/difference_identities.rs");
example!(quadratic_counterexample, "../examples/quadratic_counterexample.rs");
example!(ball_indicator, "../examples/ball_indicator.rs");
example!(padic_interpolation, "../examples/padic_interpolation.rs");
example!(real_extension, "../examples/real_extension.rs");
example!(padic_extension, "../examples/padic_extension.rs");
example!(equal_step_extension, "../examples/equal_step_extension.rs");
example!(campaign, "../examples/campaign.rs");
