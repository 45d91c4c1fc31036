use ferrichain::eigensolver::{dense_ground_state, ground_state, GroundStateVector, SolverMethod, SolverOptions};
use ferrichain::entanglement::{negativity_scan, reduced_density_matrix};
use ferrichain::hamiltonian::{create_mumagnon, HamiltonianSpec};
use ferrichain::mumagnon::{
    approximate_relative_amplitude, generate_candidates, measured_split_amplitude, place_mumagnons,
    split_magnon_placements, CandidateRules, DictionaryOptions, StructureDictionary,
};
use ferrichain::spinbasis::{enumerate_sector, neel_sector, Boundary, HalfInt, LatticeSpec, Packing};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn alternating(n: usize, large: HalfInt, boundary: Boundary, field: f64) -> LatticeSpec {
    LatticeSpec::alternating(n, HalfInt::HALF, large, boundary).unwrap().with_field(field)
}

fn solve(l: &LatticeSpec) -> GroundStateVector {
    let m = neel_sector(l).unwrap_or(HalfInt::ZERO);
    ground_state(&HamiltonianSpec::new(l.clone()), m, &SolverOptions::default()).unwrap().0
}

fn sector_of(l: &LatticeSpec, pick: usize) -> HalfInt {
    let total = l.total_spin().twice();
    HalfInt::from_twice(-total + 2 * (pick as i32 % (total + 1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn packing_round_trips_enumerated_configurations(half_n in 1usize..=6, large in 1i32..=3, pick in 0usize..10_000) {
        let l = alternating(2 * half_n, HalfInt::from_twice(large), Boundary::Open, 0.0);
        let basis = enumerate_sector(&l, sector_of(&l, pick)).unwrap();
        let packing = Packing::new(&l).unwrap();
        let c = basis.config(pick % basis.len());
        prop_assert_eq!(packing.unpack(packing.pack(&c)), c);
    }

    #[test]
    fn mumagnon_creation_stays_in_the_sector(half_n in 1usize..=5, large in 1i32..=3, pick in 0usize..10_000, a in 0usize..10, b in 0usize..10) {
        let l = alternating(2 * half_n, HalfInt::from_twice(large), Boundary::Ring, 0.0);
        let m = sector_of(&l, pick);
        let basis = enumerate_sector(&l, m).unwrap();
        let c = basis.config(pick % basis.len());
        let small = 2 * (a % half_n);
        let big = 2 * (b % half_n) + 1;
        if let Some(d) = create_mumagnon(&l, &c, small, big).unwrap() {
            prop_assert!(basis.index_of(&d).is_some());
        }
    }

    #[test]
    fn operator_is_hermitian_on_random_vectors(half_n in 2usize..=5, large in 1i32..=3, ring in any::<bool>(), seed in any::<u64>()) {
        let boundary = if ring { Boundary::Ring } else { Boundary::Open };
        let l = alternating(2 * half_n, HalfInt::from_twice(large), boundary, 0.37);
        let basis = enumerate_sector(&l, neel_sector(&l).unwrap_or(HalfInt::ZERO)).unwrap();
        let spec = HamiltonianSpec::new(l);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<f64> = (0..basis.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..basis.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (mut hu, mut hv) = (vec![0.0; basis.len()], vec![0.0; basis.len()]);
        spec.apply(&basis, &u, &mut hu).unwrap();
        spec.apply(&basis, &v, &mut hv).unwrap();
        let left: f64 = u.iter().zip(&hv).map(|(a, b)| a * b).sum();
        let right: f64 = hu.iter().zip(&v).map(|(a, b)| a * b).sum();
        prop_assert!((left - right).abs() < 1e-12 * (1.0 + left.abs()));
    }

    #[test]
    fn reduced_density_matrices_are_valid(sites in proptest::sample::subsequence((0..10usize).collect::<Vec<_>>(), 1..=4)) {
        let l = alternating(10, HalfInt::THREE_HALVES, Boundary::Ring, 0.1);
        let gs = dense_or_cached(&l);
        reduced_density_matrix(&gs, &sites).unwrap().validate().unwrap();
    }
}

fn dense_or_cached(l: &LatticeSpec) -> GroundStateVector {
    use std::sync::OnceLock;
    static GS: OnceLock<GroundStateVector> = OnceLock::new();
    GS.get_or_init(|| solve(l)).clone()
}

#[test]
fn field_adds_minus_b_m_identity_within_a_sector() {
    for n in [2, 4, 6] {
        let base = alternating(n, HalfInt::THREE_HALVES, Boundary::Open, 0.0);
        let total = base.total_spin();
        let mut m = -total;
        while m <= total {
            let basis = enumerate_sector(&base, m).unwrap();
            let h0 = HamiltonianSpec::new(base.clone()).dense_matrix(&basis).unwrap();
            let hb = HamiltonianSpec::new(base.clone().with_field(0.3)).dense_matrix(&basis).unwrap();
            let expect = nalgebra::DMatrix::<f64>::identity(basis.len(), basis.len()) * (-0.3 * m.to_f64());
            assert!((hb - h0 - expect).amax() < 1e-12);
            m += HalfInt::ONE;
        }
    }
}

#[test]
fn krylov_energy_is_variational() {
    for (n, boundary) in [(4, Boundary::Ring), (6, Boundary::Open), (8, Boundary::Ring)] {
        for large in [HalfInt::ONE, HalfInt::THREE_HALVES] {
            let l = alternating(n, large, boundary, 0.1);
            let spec = HamiltonianSpec::new(l.clone());
            let m = neel_sector(&l).unwrap();
            let (_, spectrum) = dense_ground_state(&spec, m).unwrap();
            let opts = SolverOptions { method: SolverMethod::Lanczos, ..SolverOptions::default() };
            let (gs, _) = ground_state(&spec, m, &opts).unwrap();
            let diff = gs.energy() - spectrum[0];
            assert!(diff > -1e-12 && diff <= 1e-9, "N={n}: {diff:e}");
        }
    }
}

#[test]
fn dense_ground_vector_does_not_depend_on_field() {
    let base = alternating(6, HalfInt::THREE_HALVES, Boundary::Ring, 0.05);
    let m = neel_sector(&base).unwrap();
    let (a, _) = dense_ground_state(&HamiltonianSpec::new(base.clone()), m).unwrap();
    for field in [0.1, 0.2] {
        let (b, _) = dense_ground_state(&HamiltonianSpec::new(base.clone().with_field(field)), m).unwrap();
        let diff = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "B={field}: {diff:e}");
    }
}

#[test]
fn listed_structures_converge_with_ring_size() {
    let structures: [&[(usize, usize)]; 4] = [&[(0, 1)], &[(0, 1), (2, 3)], &[(0, 1), (2, 1)], &[(0, 1), (4, 3)]];
    let states: Vec<GroundStateVector> =
        [10, 12, 14].iter().map(|&n| solve(&alternating(n, HalfInt::THREE_HALVES, Boundary::Ring, 0.1))).collect();
    for moves in structures {
        let a: Vec<f64> = states.iter().map(|gs| gs.relative_amplitude(&place_mumagnons(gs.lattice(), moves).unwrap())).collect();
        assert!((a[2] - a[1]).abs() < (a[1] - a[0]).abs(), "{moves:?}: {a:?}");
    }
}

#[test]
fn in_sample_estimates_track_exact_amplitudes() {
    let gs = solve(&alternating(14, HalfInt::THREE_HALVES, Boundary::Ring, 0.1));
    let l = gs.lattice();
    let dict = StructureDictionary::build(&gs, &DictionaryOptions::default()).unwrap();
    let kept = generate_candidates(l, &dict, 1e-3, &CandidateRules::default()).unwrap();
    let mut rel = Vec::with_capacity(kept.len());
    for c in &kept {
        let exact = gs.relative_amplitude(c);
        let est = approximate_relative_amplitude(l, c, &dict).unwrap();
        assert_eq!(exact.signum(), est.signum(), "{}", c.display(l));
        rel.push(((est - exact) / exact).abs());
    }
    rel.sort_by(f64::total_cmp);
    let median = rel[rel.len() / 2];
    assert!(median < 0.10, "median relative error {median}");
}

#[test]
fn split_magnon_amplitude_decays_with_gap() {
    // the largest gap that does not wrap a 14-site ring is 6
    let gs = solve(&alternating(14, HalfInt::THREE_HALVES, Boundary::Ring, 0.1));
    let a: Vec<f64> = [0, 2, 4, 6].iter().map(|&d| measured_split_amplitude(&gs, d).unwrap().abs()).collect();
    assert!(a.windows(2).all(|w| w[1] < w[0]), "{a:?}");
}

#[test]
fn open_chain_bulk_matches_the_ring() {
    let open = solve(&alternating(12, HalfInt::THREE_HALVES, Boundary::Open, 0.1));
    let ring = solve(&alternating(14, HalfInt::THREE_HALVES, Boundary::Ring, 0.1));
    let n = 12;
    for d in [0, 2] {
        let reference = measured_split_amplitude(&ring, d).unwrap();
        for p in split_magnon_placements(&open, d).unwrap() {
            let bulk = p.raised.min(p.lowered) >= 3 && p.raised.max(p.lowered) <= n - 3;
            if bulk {
                let dev = (p.alpha_r / reference - 1.0).abs();
                assert!(dev < 0.02, "D={d} raise {} lower {}: {dev}", p.raised, p.lowered);
            }
        }
        // flipping the end spin-1/2 is far from the bulk value
        let edge = split_magnon_placements(&open, d).unwrap().into_iter().find(|p| p.raised == 0).unwrap();
        assert!((edge.alpha_r / reference - 1.0).abs() > 0.5);
    }
}

#[test]
fn larger_spin_keeps_negativity_to_larger_separations() {
    let reach = |large| {
        let gs = solve(&alternating(14, large, Boundary::Ring, 0.1));
        negativity_scan(&gs, &[0, 1, 2, 3, 4]).unwrap().iter().filter(|p| p.n4 > 0.0).map(|p| p.separation).max().unwrap()
    };
    assert!(reach(HalfInt::THREE_HALVES) > reach(HalfInt::ONE));
}
