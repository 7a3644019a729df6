//! Scalar math shims so the crate builds both on `std` and on `no_std + libm`.

#![allow(dead_code)]

macro_rules! shim {
    ($($name:ident => $libm:ident),* $(,)?) => {
        $(
            #[cfg(feature = "std")]
            #[inline(always)]
            pub(crate) fn $name(x: f64) -> f64 {
                f64::$name(x)
            }
            #[cfg(not(feature = "std"))]
            #[inline(always)]
            pub(crate) fn $name(x: f64) -> f64 {
                libm::$libm(x)
            }
        )*
    };
}

shim! {
    abs => fabs,
    atan => atan,
    cosh => cosh,
    exp => exp,
    ln => log,
    sqrt => sqrt,
    tanh => tanh,
}

#[inline(always)]
pub(crate) fn hypot2(x: f64, y: f64) -> f64 {
    sqrt(x * x + y * y)
}

#[inline(always)]
pub(crate) fn max(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

#[inline(always)]
pub(crate) fn min(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}
