use std::f64::consts::{FRAC_PI_4, PI};

use cone_core::qfree::{j0_free, radial_free, FreeEigenstate};
use cone_core::specfun::QuadratureRule;
use cone_core::ConeGeometry;
use num_complex::Complex64;

const MASS: f64 = 1.0;

fn cone() -> ConeGeometry {
    ConeGeometry::new(FRAC_PI_4).unwrap()
}

/// Radial profile of a Gaussian packet in `q = √E` built from delta-normalized
/// upper-nappe states, `∫ g(q) u_q(l) dq` with `∫ g² dq = 1`.
struct Packet {
    center: f64,
    width: f64,
    rule: QuadratureRule,
    j: f64,
}

impl Packet {
    fn new(center: f64, width: f64, j: f64) -> Self {
        Self {
            center,
            width,
            rule: QuadratureRule::gauss_legendre(160).unwrap(),
            j,
        }
    }

    fn weight(&self, q: f64) -> f64 {
        let z = (q - self.center) / self.width;
        (2.0 * PI * self.width * self.width).powf(-0.25) * (-0.25 * z * z).exp()
    }

    fn radial(&self, l: f64, geom: &ConeGeometry) -> f64 {
        let (lo, hi) = (self.center - 9.0 * self.width, self.center + 9.0 * self.width);
        self.rule.integrate(lo, hi, |q| {
            let st = FreeEigenstate::normalized(self.j, q * q, MASS, 1.0, geom).unwrap();
            self.weight(q) * radial_free(&st, l, MASS).unwrap().re
        })
    }
}

/// `2π ∫₀^L l ψ_a ψ_b dl` by composite Gauss–Legendre.
fn overlap(a: &Packet, b: &Packet, extent: f64, geom: &ConeGeometry) -> f64 {
    let rule = QuadratureRule::gauss_legendre(24).unwrap();
    let panels = (extent / 1.5).ceil() as usize;
    let h = extent / panels as f64;
    (0..panels)
        .map(|i| {
            let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
            rule.integrate(x0, x1, |l| l * a.radial(l, geom) * b.radial(l, geom))
        })
        .sum::<f64>()
        * 2.0
        * PI
}

#[test]
fn smeared_packets_are_normalized() {
    let g = cone();
    let p = Packet::new(1.0, 0.05, 1.0);
    let self_overlap = overlap(&p, &p, 110.0, &g);
    assert!((self_overlap - 1.0).abs() < 5e-3, "{self_overlap}");
}

#[test]
fn distinct_energies_decouple_as_packets_sharpen() {
    let g = cone();
    let mut prev = f64::INFINITY;
    for (width, extent) in [(0.1, 60.0), (0.05, 110.0), (0.025, 220.0)] {
        let a = Packet::new(1.0, width, 2.0);
        let b = Packet::new(1.3, width, 2.0);
        let v = overlap(&a, &b, extent, &g);
        // ∫ g_a g_b dq for two Gaussians of equal width
        let expect = (-(0.3f64).powi(2) / (8.0 * width * width)).exp();
        assert!((v - expect).abs() < 5e-3, "width {width}: {v} vs {expect}");
        assert!(v < prev);
        prev = v;
    }
    assert!(prev < 1e-3);
}

#[test]
fn nappes_have_disjoint_support() {
    let g = cone();
    let up = FreeEigenstate::new(1.0, 0.7, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), &g).unwrap();
    let down = FreeEigenstate::new(1.0, 1.9, Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.4), &g).unwrap();
    for i in -400..=400 {
        let l = 0.05 * i as f64;
        let prod = radial_free(&up, l, MASS).unwrap().conj() * radial_free(&down, l, MASS).unwrap();
        assert_eq!(prod, Complex64::new(0.0, 0.0), "l = {l}");
    }
}

#[test]
fn small_j_profile_is_the_sine_branch() {
    let g = cone();
    let energy = 0.8;
    let k = (2.0 * MASS * energy).sqrt();
    let amp = Complex64::new(0.7, -0.2);
    let st = FreeEigenstate::new(1e-8, energy, amp, amp, &g).unwrap();
    let sine_amp = amp * (2.0 / (PI * k)).sqrt();
    for i in 1..=200 {
        let l = 0.1 * i as f64;
        for l in [l, -l] {
            let bessel = radial_free(&st, l, MASS).unwrap();
            let sine = j0_free(energy, l.abs(), sine_amp, Complex64::new(0.0, 0.0), MASS).unwrap();
            assert!((bessel - sine).norm() < 1e-6, "l = {l}");
        }
    }
}
