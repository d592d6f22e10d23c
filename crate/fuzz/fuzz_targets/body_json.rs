#![no_main]

use libfuzzer_sys::fuzz_target;

// The body loader must never panic on arbitrary bytes, and anything it
// accepts must be a usable body: finite support data and a finite interior
// witness.
fuzz_target!(|data: &[u8]| {
    if let Ok(body) = funkgeo::io::parse_body_bytes(data) {
        let d = body.dimension();
        assert!(d >= 1);
        let c = body.interior_point();
        assert!(c.iter().all(|x| x.is_finite()));
        let mut u = nalgebra::DVector::zeros(d);
        u[0] = 1.0;
        assert!(body.support_function(&u).is_finite());
        assert!(body.support_point(&u).iter().all(|x| x.is_finite()));
    }
});
