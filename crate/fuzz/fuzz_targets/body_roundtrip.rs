#![no_main]

use libfuzzer_sys::fuzz_target;

use funkgeo::io::BodySpec;

// Any description that builds must survive a serialize/parse round trip and
// build again to a body of the same dimension and support value.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = serde_json::from_str::<BodySpec>(text) else { return };
    let Ok(body) = spec.build() else { return };

    let json = serde_json::to_string(&spec).expect("specs serialize");
    let body2 = funkgeo::io::parse_body(&json).expect("round-tripped spec builds");
    assert_eq!(body.dimension(), body2.dimension());

    let d = body.dimension();
    let mut u = nalgebra::DVector::zeros(d);
    u[0] = 1.0;
    let h1 = body.support_function(&u);
    let h2 = body2.support_function(&u);
    assert!(
        (h1 - h2).abs() <= 1e-9 * (1.0 + h1.abs()),
        "support mismatch after round trip: {h1} vs {h2}"
    );
});
