//! Acceptance checks, one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cycle_encode::distinguish::{compare, Encoder, Verdict};
use cycle_encode::hodge::{
    betti_number, cycle_space_projector, frobenius, kernel_basis_with, Orientation, SpanningForest,
    ZERO_TOL,
};
use cycle_encode::peoi::{
    family_by_name, filter_enhanced_incidence, min_mlp, peoi_encode, RhoFamily,
};
use cycle_encode::scb::{
    brute_force_scb, cycle_incidence, scb_length_histogram, shortest_cycle_basis,
};
use cycle_encode::topo::{cycle_epd, epd_multiset_eq, sssp_filter, PersistencePair};
use cycle_encode::{
    gen_cfi, gen_cycle_point_cloud, gen_rook4x4, gen_shrikhande, Graph, PointCloudParams,
};
use ndarray::{Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use common::{fixture, oracle_components, random_graph, random_permutation};

const PROJECTOR_LIMIT: Duration = Duration::from_secs(1);
const SCB_LIMIT: Duration = Duration::from_secs(5);
const CFI_LIMIT: Duration = Duration::from_secs(60);
const WL_LIMIT: Duration = Duration::from_secs(30);

const IDEMPOTENCE_TOL: f64 = 1e-9;
const SYMMETRY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-8;
const BASIS_INVARIANCE_TOL: f64 = 1e-8;
const EPD_TOL: f64 = 1e-9;

const RANDOM_GRAPHS: usize = 200;
const RANDOM_MAX_N: usize = 12;
const RANDOM_MAX_M: usize = 14;
const FORESTS_PER_GRAPH: usize = 20;
const MIN_PAIRS: usize = 10_000;
const POINT_CLOUDS: u64 = 50;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verdict(a: &Graph, b: &Graph, encoder: &str) -> Result<Verdict, String> {
    let e: Encoder = encoder.parse().map_err(|e| format!("{encoder}: {e}"))?;
    compare(a, b, &e)
        .map(|v| v.result)
        .map_err(|e| format!("{encoder}: {e}"))
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for (name, graph, zeros) in [
        ("rook", gen_rook4x4(), 22),
        ("shrikhande", gen_shrikhande(), 16),
    ] {
        let (counts, t) = timed(|| cycle_space_projector(&graph).zero_counts(ZERO_TOL));
        ensure(counts.iter().all(|&c| c == zeros), || {
            format!("{name} zero counts {counts:?}")
        })?;
        ensure(t < PROJECTOR_LIMIT, || format!("{name} took {t:?}"))?;
        notes.push(format!("{name} {zeros}/column in {t:.2?}"));
    }
    Ok(notes.join(", "))
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for (name, graph, want) in [
        ("rook", gen_rook4x4(), [(3, 24), (4, 9)]),
        ("shrikhande", gen_shrikhande(), [(3, 31), (4, 2)]),
    ] {
        let (basis, t) = timed(|| shortest_cycle_basis(&graph));
        let basis = basis.map_err(|e| format!("{name}: {e}"))?;
        let hist = scb_length_histogram(&basis);
        ensure(hist == BTreeMap::from(want), || {
            format!("{name} histogram {hist:?}")
        })?;
        ensure(basis.len() == 33 && betti_number(&graph) == 33, || {
            format!(
                "{name} basis size {} betti {}",
                basis.len(),
                betti_number(&graph)
            )
        })?;
        ensure(t < SCB_LIMIT, || format!("{name} took {t:?}"))?;
        notes.push(format!("{name} {hist:?} in {t:.2?}"));
    }
    Ok(notes.join(", "))
}

fn criterion_3() -> Outcome {
    let (result, t) = timed(|| -> Outcome {
        let g0 = gen_cfi(4, 0).map_err(|e| e.to_string())?;
        let g1 = gen_cfi(4, 1).map_err(|e| e.to_string())?;
        ensure(g0.n() == 40 && g1.n() == 40, || {
            format!("node counts {} {}", g0.n(), g1.n())
        })?;
        let b0 = shortest_cycle_basis(&g0).map_err(|e| e.to_string())?;
        let b1 = shortest_cycle_basis(&g1).map_err(|e| e.to_string())?;
        let h0 = scb_length_histogram(&b0);
        let h1 = scb_length_histogram(&b1);
        ensure(h0 == BTreeMap::from([(3, 281)]), || {
            format!("G0 histogram {h0:?}")
        })?;
        ensure(h1.get(&4).copied().unwrap_or(0) >= 1, || {
            format!("G1 histogram {h1:?}")
        })?;
        ensure(
            verdict(&g0, &g1, "wl1")? == Verdict::Indistinguishable,
            || "wl1 separated".into(),
        )?;
        ensure(
            verdict(&g0, &g1, "scb-lengths")? == Verdict::Distinguished,
            || "scb-lengths did not separate".into(),
        )?;
        Ok(format!("G0 {h0:?}, G1 {h1:?}"))
    });
    let note = result?;
    ensure(t < CFI_LIMIT, || format!("took {t:?}"))?;
    Ok(format!(
        "{note}, wl1 Indistinguishable, scb-lengths Distinguished in {t:.2?}"
    ))
}

fn criterion_4() -> Outcome {
    let fam = family_by_name("counting").map_err(|e| e.to_string())?;
    for (file, want) in [
        (
            "peoi_pair_a.json",
            [4.0, 4.0, 2.0, 6.0, 4.0, 4.0, 4.0, 2.0, 2.0],
        ),
        (
            "peoi_pair_b.json",
            [4.0, 4.0, 2.0, 6.0, 4.0, 2.0, 6.0, 2.0, 2.0],
        ),
    ] {
        let g = fixture(file);
        let x = cycle_incidence(&shortest_cycle_basis(&g).map_err(|e| e.to_string())?);
        let out = peoi_encode(&x.to_f64(), &fam).map_err(|e| e.to_string())?;
        let got: Vec<f64> = out.data.column(0).to_vec();
        ensure(out.d() == 1 && got == want, || format!("{file}: {got:?}"))?;
    }
    Ok("pair (a) [4,4,2,6,4,4,4,2,2], pair (b) [4,4,2,6,4,2,6,2,2]".into())
}

fn criterion_5() -> Outcome {
    let a = fixture("peoi_pair_a.json");
    let b = fixture("peoi_pair_b.json");
    let want = [
        PersistencePair::new(3.0, 1.0),
        PersistencePair::new(3.0, 2.0),
        PersistencePair::new(4.0, 3.0),
    ];
    for (name, g) in [("a", &a), ("b", &b)] {
        let basis = shortest_cycle_basis(g).map_err(|e| e.to_string())?;
        let f = sssp_filter(g, 0).map_err(|e| e.to_string())?;
        let epd = cycle_epd(g, &basis, &f).map_err(|e| e.to_string())?;
        ensure(epd_multiset_eq(&epd, &want, EPD_TOL), || {
            format!("pair {name}: {epd:?}")
        })?;
    }
    ensure(
        verdict(&a, &b, "epd:sssp:0")? == Verdict::Indistinguishable,
        || "epd separated".into(),
    )?;
    ensure(
        verdict(&a, &b, "peoi:epd_min:sssp:0")? == Verdict::Distinguished,
        || "filter-enhanced epd_min did not separate".into(),
    )?;
    Ok("root-u1 EPD {(3,1),(3,2),(4,3)} on both, epd Indistinguishable, peoi:epd_min Distinguished".into())
}

fn criterion_6() -> Outcome {
    let r = gen_rook4x4();
    let s = gen_shrikhande();
    let (result, t) = timed(|| -> Result<(), String> {
        for (enc, want) in [
            ("fwl2", Verdict::Indistinguishable),
            ("wl1", Verdict::Indistinguishable),
            ("projector-zeros", Verdict::Distinguished),
            ("scb-lengths", Verdict::Distinguished),
        ] {
            let got = verdict(&r, &s, enc)?;
            ensure(got == want, || format!("{enc}: {got:?}"))?;
        }
        Ok(())
    });
    result?;
    ensure(t < WL_LIMIT, || format!("took {t:?}"))?;
    Ok(format!(
        "fwl2/wl1 Indistinguishable, projector-zeros/scb-lengths Distinguished in {t:.2?}"
    ))
}

fn bitwise_eq(a: &Array2<f64>, b: &Array2<f64>) -> bool {
    a.shape() == b.shape()
        && a.iter()
            .zip(b.iter())
            .all(|(x, y)| x.to_bits() == y.to_bits())
}

fn peoi_symmetries<R: Rng>(rng: &mut R, x: &Array2<f64>, fam: &RhoFamily) -> Result<(), String> {
    let base = peoi_encode(x, fam).map_err(|e| e.to_string())?.data;
    let rows = random_permutation(rng, x.nrows());
    let cols = random_permutation(rng, x.ncols());
    let px = x.select(Axis(0), &rows);
    let permuted = peoi_encode(&px, fam).map_err(|e| e.to_string())?.data;
    ensure(bitwise_eq(&permuted, &base.select(Axis(0), &rows)), || {
        format!("{}: row equivariance broken", fam.name())
    })?;
    let xq = x.select(Axis(1), &cols);
    let shuffled = peoi_encode(&xq, fam).map_err(|e| e.to_string())?.data;
    ensure(bitwise_eq(&shuffled, &base), || {
        format!("{}: column invariance broken", fam.name())
    })
}

fn criterion_7() -> Outcome {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
    let mut worst = [0.0f64; 4];
    for i in 0..RANDOM_GRAPHS {
        let g = random_graph(&mut rng, RANDOM_MAX_N, RANDOM_MAX_M);
        let tag = |what: &str| format!("graph {i} (n={}, m={}): {what}", g.n(), g.m());

        let o = cycle_space_projector(&g);
        let betti = betti_number(&g) as f64;
        let residuals = [
            o.idempotence_residual(),
            o.symmetry_residual(),
            (o.trace() - betti).abs(),
        ];
        for (w, r) in worst.iter_mut().zip(residuals) {
            *w = w.max(r.abs());
        }
        ensure(residuals[0] <= IDEMPOTENCE_TOL, || tag("idempotence"))?;
        ensure(residuals[1] <= SYMMETRY_TOL, || tag("symmetry"))?;
        ensure(residuals[2] <= TRACE_TOL, || tag("trace"))?;

        let canonical = Orientation::canonical(g.m());
        for _ in 0..FORESTS_PER_GRAPH {
            let forest = SpanningForest::random(&g, &mut rng);
            let other = kernel_basis_with(&g, &forest, &canonical).projector();
            let r = frobenius(&(&other.matrix - &o.matrix));
            worst[3] = worst[3].max(r);
            ensure(r < BASIS_INVARIANCE_TOL, || tag("basis invariance"))?;
        }

        let basis = shortest_cycle_basis(&g).map_err(|e| tag(&e.to_string()))?;
        let exact = brute_force_scb(&g).map_err(|e| tag(&e.to_string()))?;
        ensure(
            basis.len() == exact.len() && basis.total_weight() == exact.total_weight(),
            || {
                tag(&format!(
                    "reduction weight {} vs brute force {}",
                    basis.total_weight(),
                    exact.total_weight()
                ))
            },
        )?;

        let x = cycle_incidence(&basis);
        let general = format!("counting_general:{}", g.m().max(1));
        for name in ["counting", "cycle_count", general.as_str()] {
            let fam = family_by_name(name).map_err(|e| e.to_string())?;
            peoi_symmetries(&mut rng, &x.to_f64(), &fam).map_err(|e| tag(&e))?;
        }
        let filter: Vec<f64> = (0..g.m())
            .map(|_| f64::from(rng.random_range(1..=8u8)))
            .collect();
        let fx = filter_enhanced_incidence(&x, &filter).map_err(|e| e.to_string())?;
        let fam = family_by_name("epd_min").map_err(|e| e.to_string())?;
        peoi_symmetries(&mut rng, &fx, &fam).map_err(|e| tag(&e))?;
    }

    // values on a common dyadic grid keep x + y and x - y exact
    for _ in 0..MIN_PAIRS {
        let x = f64::from(rng.random_range(-(1 << 20)..=(1 << 20))) / 1024.0;
        let y = f64::from(rng.random_range(-(1 << 20)..=(1 << 20))) / 1024.0;
        ensure(min_mlp(x, y) == x.min(y), || {
            format!("min_mlp({x}, {y}) = {}", min_mlp(x, y))
        })?;
    }
    Ok(format!(
        "{RANDOM_GRAPHS} graphs: idempotence {:.1e}, symmetry {:.1e}, trace {:.1e}, basis invariance {:.1e}; \
         PEOI symmetries exact; reduction = brute force; min_mlp exact on {MIN_PAIRS} pairs",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn criterion_8() -> Outcome {
    for seed in 0..POINT_CLOUDS {
        let g =
            gen_cycle_point_cloud(&PointCloudParams::with_seed(seed)).map_err(|e| e.to_string())?;
        let c = oracle_components(g.n(), g.edges());
        let want = g.m() + c - g.n();
        ensure(betti_number(&g) == want, || {
            format!("seed {seed}: betti {} vs oracle {want}", betti_number(&g))
        })?;
    }
    Ok(format!(
        "{POINT_CLOUDS} point clouds match the union-find oracle"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("projector zero counts", criterion_1),
        ("SCB composition", criterion_2),
        ("CFI", criterion_3),
        ("PEOI counting vectors", criterion_4),
        ("EPD", criterion_5),
        ("WL harness", criterion_6),
        ("property suites", criterion_7),
        ("Betti oracle", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(note) => println!("PASS criterion {}: {name}: {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
