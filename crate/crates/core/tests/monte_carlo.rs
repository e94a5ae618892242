use dualflow::dual1d::{bessel3_cdf, brownian_path, pitman_dual, symmetric_dual};
use dualflow::radial::{simulate_disk, DiskDualState, RadialProfile};
use dualflow::sde::{NoiseStream, TimeGrid};
use dualflow::stats::{ks_one_sample, ks_two_sample, uniform_cdf, EmpiricalSample};

const N: u64 = 4000;

#[test]
fn pitman_dual_at_time_one_is_bessel3() {
    let grid = TimeGrid::<f64>::new(1.0, 2000).unwrap();
    let r: Vec<f64> = (0..N)
        .map(|i| {
            let mut src = NoiseStream::new(31, i, 1).source();
            *pitman_dual(&brownian_path(&mut src, &grid, 0.0)).unwrap().last().unwrap()
        })
        .collect();
    let ks = ks_one_sample(&EmpiricalSample::from_unsorted(r).unwrap(), |x| bessel3_cdf(x, 1.0));
    assert!(ks < 0.04, "ks {ks}");
}

#[test]
fn symmetric_and_pitman_duals_agree_in_law() {
    let grid = TimeGrid::<f64>::new(1.0, 2000).unwrap();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..N {
        let mut src = NoiseStream::new(32, i, 1).source();
        let x = brownian_path(&mut src, &grid, 0.0);
        a.push(*symmetric_dual(&x).unwrap().last().unwrap());
        let mut src = NoiseStream::new(33, i, 1).source();
        let x = brownian_path(&mut src, &grid, 0.0);
        b.push(*pitman_dual(&x).unwrap().last().unwrap());
    }
    let ks = ks_two_sample(&EmpiricalSample::from_unsorted(a).unwrap(), &EmpiricalSample::from_unsorted(b).unwrap());
    assert!(ks < 0.05, "ks {ks}");
}

#[test]
fn disk_particle_is_uniform_given_the_radius() {
    let profile = RadialProfile::<f64>::euclidean(2).unwrap();
    let grid = TimeGrid::<f64>::new(0.2, 1000).unwrap();
    let mut u = Vec::new();
    for i in 0..N {
        let mut init = NoiseStream::new(34, i, 1).source();
        // Uniform start in the unit disk: rho = sqrt(V).
        let v: f64 = init.uniform();
        let start = DiskDualState::new(v.sqrt().max(1e-6), 1.0).unwrap();
        let mut src = NoiseStream::new(35, i, 2).source();
        let run = simulate_disk(&profile, start, &grid, &mut src, |_, _, _, _| {});
        if run.stop.is_none() {
            let s = run.state;
            u.push((s.rho / s.radius).powi(2));
        }
    }
    assert!(u.len() as u64 > N * 9 / 10);
    let ks = ks_one_sample(&EmpiricalSample::from_unsorted(u).unwrap(), uniform_cdf);
    assert!(ks < 0.04, "ks {ks}");
}
