//! Acceptance criteria; one PASS/FAIL line each. All comparisons are exact.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dcsplit::caps::Caps;
use dcsplit::complex::{Complex, Hyperplane};
use dcsplit::constructions::{self, WeightedFan2D};
use dcsplit::cpwl::{AffineMap, Cpwl};
use dcsplit::decomposition as dec;
use dcsplit::gluing::{polygon_gluing, Gluing};
use dcsplit::rat::{frac, int, ints};
use dcsplit::submodular::{self as sm, SetFunction, WeightedGraph};
use dcsplit::{fixtures, nn, Rat};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: dcsplit::Error) -> String {
    e.to_string()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of distinct affine maps of a convex function (its pieces, independent of coarsening).
fn distinct_maps(f: &Cpwl) -> usize {
    f.pieces.iter().collect::<BTreeSet<_>>().len()
}

fn ray_set(c: &Complex, facets: &[usize]) -> BTreeSet<Vec<i64>> {
    facets
        .iter()
        .map(|&i| c.ray_of_facet(i).unwrap().iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect()
}

fn c1_median() -> Check {
    let f = fixtures::median();
    let c = f.complex.clone();
    let w = f.weights();
    let pos: Vec<usize> = (0..w.len()).filter(|&i| w[i].is_positive()).collect();
    let neg: Vec<usize> = (0..w.len()).filter(|&i| w[i].is_negative()).collect();
    let want_pos: BTreeSet<Vec<i64>> = [vec![1, 0], vec![0, 1], vec![-1, -1]].into_iter().collect();
    let want_neg: BTreeSet<Vec<i64>> = [vec![-1, 0], vec![0, -1], vec![1, 1]].into_iter().collect();
    ensure(ray_set(&c, &pos) == want_pos, "convex breakpoint rays differ from the figure")?;
    ensure(ray_set(&c, &neg) == want_neg, "concave breakpoint rays differ from the figure")?;
    let verts = dec::enumerate(&f).map_err(err)?;
    ensure(verts.len() == 1, format!("{} vertices", verts.len()))?;
    let p = &verts[0];
    let g = fixtures::max_of(c.clone(), &[AffineMap::new(ints(&[1, 1]), int(0)), AffineMap::new(ints(&[1, 0]), int(0)), AffineMap::new(ints(&[0, 1]), int(0))]);
    let h = fixtures::max_x1_x2_0(c);
    ensure(p.g.eq_mod_affine(&g), "g is not the max pair-sum of (x1, x2, 0)")?;
    ensure(p.h.eq_mod_affine(&h), "h is not max(x1, x2, 0)")?;
    ensure(p.g.sub(&p.h).map_err(err)? == f, "g - h != f")?;
    Ok(format!(
        "{} convex / {} concave rays as in the figure; 1 vertex = (max pair-sum, max(x1,x2,0)) up to affine",
        pos.len(),
        neg.len()
    ))
}

fn c2_order_statistics() -> Check {
    let mut out = Vec::new();
    for n in [3usize, 4] {
        let c = constructions::order_statistic(n, 2).map_err(err)?;
        let (f, p) = (&c.f, &c.point);
        ensure(dec::unique_vertex_certificate(f, &p.g, &p.h).map_err(err)?, format!("n={n}: certificate fails"))?;
        for x in [ints(&vec![3; n]), (0..n as i64).map(|i| int(i * i - 2 * i)).collect()] {
            ensure(p.g.evaluate(&x) == constructions::top_k_sum(&x, 2).eval(&x), format!("n={n}: g is not the max pair-sum"))?;
            ensure(p.h.evaluate(&x) == constructions::top_k_sum(&x, 1).eval(&x), format!("n={n}: h is not the max"))?;
        }
        let verts = dec::enumerate(f).map_err(err)?;
        ensure(verts.len() == 1 && verts[0].wg == p.wg, format!("n={n}: enumerate gave {} vertices", verts.len()))?;
        let (pg, ph) = p.pieces().map_err(err)?;
        ensure((pg, ph) == (distinct_maps(&p.g), distinct_maps(&p.h)), format!("n={n}: coarsen disagrees with the distinct-map count"))?;
        ensure((pg, ph) == (binom(n, 2), n), format!("n={n}: pieces ({pg}, {ph})"))?;
        let (pf, _) = f.piece_count();
        ensure(pg <= pf && ph <= pf, format!("n={n}: more pieces than f ({pf})"))?;
        out.push(format!("n={n}: pieces ({pg},{ph}) <= {pf}"));
    }
    Ok(format!("certificate and single vertex; {}", out.join(", ")))
}

fn c3_constructions() -> Check {
    let f = fixtures::median();
    let minimal = dec::minimal_set(&f).map_err(err)?;
    ensure(minimal.len() == 1, "median has several minimal vertices")?;
    let best = minimal[0].pieces().map_err(err)?;
    let he = constructions::hyperplane_extension(&f).map_err(err)?;
    let lm = constructions::local_maxima(&f).map_err(err)?;
    let hinge = |a: &[i64]| AffineMap::new(ints(a), int(0));
    let target = |c: Arc<Complex>| -> Result<Cpwl, String> {
        let parts = [
            fixtures::max_of(c.clone(), &[hinge(&[1, 0]), hinge(&[0, 1])]),
            fixtures::max_of(c.clone(), &[hinge(&[1, 0]), hinge(&[0, 0])]),
            fixtures::max_of(c.clone(), &[hinge(&[0, 1]), hinge(&[0, 0])]),
        ];
        parts[0].add(&parts[1]).and_then(|s| s.add(&parts[2])).map_err(err)
    };
    ensure(he.point.g.eq_mod_affine(&target(he.f.complex.clone())?), "extension g differs")?;
    ensure(lm.point.g.eq_mod_affine(&target(lm.f.complex.clone())?.scale(&int(2))), "local maxima g is not twice the target")?;
    let mut refinements = 0;
    for (name, c) in [("extension", &he), ("local maxima", &lm)] {
        let pc = c.point.pieces().map_err(err)?;
        ensure(best.0 <= pc.0 && best.1 <= pc.1 && best != pc, format!("{name}: {pc:?} not strictly dominated by {best:?}"))?;
        ensure(!dec::is_vertex(&c.f, &c.point).map_err(err)?, format!("{name}: is a vertex"))?;
        for extra in [vec![Hyperplane::from_ints(&[1, 1], int(0)).unwrap()], vec![Hyperplane::from_ints(&[1, 0], int(1)).unwrap(), Hyperplane::from_ints(&[1, -2], int(0)).unwrap()]] {
            let (r, anc) = c.f.complex.refine(&extra).map_err(err)?;
            ensure(dec::is_regular(&r), "refinement is not regular")?;
            let r = Arc::new(r);
            let fr = c.f.pull_back(r.clone(), &anc);
            let pr = dec::pull_back(&c.point, r, &anc);
            ensure(!dec::is_vertex(&fr, &pr).map_err(err)?, format!("{name}: vertex on a refinement"))?;
            refinements += 1;
        }
    }
    Ok(format!(
        "g = max(x1,x2)+max(x1,0)+max(x2,0) (local maxima: 2x); pieces {:?}, {:?} vs minimal {best:?}; not vertices on {refinements} refined complexes",
        he.point.pieces().map_err(err)?,
        lm.point.pieces().map_err(err)?
    ))
}

fn c4_tran() -> Check {
    let wf = WeightedFan2D::new(&fixtures::TRAN_RAYS, &fixtures::tran_weights()).map_err(err)?;
    let t = constructions::tran2d_minimal(&wf).map_err(err)?;
    ensure(t.closing == Some(([-1, -1], int(1))), format!("closing {:?}", t.closing))?;
    let p = &t.construction.point;
    let aug = &t.construction.f;
    ensure(dec::solve_reduced(aug).map_err(err)?.wg == p.wg, "LP on the augmented fan gives another point")?;
    let verts = dec::enumerate(aug).map_err(err)?;
    ensure(verts.iter().any(|v| v.wg == p.wg), "construction is not a vertex of the augmented fan")?;
    let pp = p.pieces().map_err(err)?;
    let hf = constructions::breakpoint_arrangement(&wf.function().map_err(err)?).map_err(err)?;
    let hverts = dec::enumerate(&hf).map_err(err)?;
    ensure(!hverts.is_empty(), "no vertices over H_f")?;
    for v in &hverts {
        let q = v.pieces().map_err(err)?;
        ensure(pp.0 <= q.0 && pp.1 <= q.1, format!("H_f vertex {q:?} not dominated by {pp:?}"))?;
    }
    Ok(format!(
        "closing ray (-1,-1) weight 1; reduced LP reproduces it; {} H_f vertices all dominated by {pp:?}",
        hverts.len()
    ))
}

fn c5_counterexample() -> Check {
    let f = fixtures::counterexample_function();
    let g = polygon_gluing(&f.complex, &f.weights()).map_err(err)?;
    let Gluing::Infeasible { system, certificate } = &g else {
        return Err("gluing is feasible".into());
    };
    ensure(g.certificate_verifies(), "certificate rejected")?;
    // direct recombination: y^T A = 0 and y^T b != 0
    let vars = 3 * system.faces.len();
    let mut comb = vec![Rat::zero(); vars];
    let mut rhs = Rat::zero();
    for ((a, b), y) in system.equalities.iter().zip(&certificate.eq) {
        for (c, x) in comb.iter_mut().zip(a) {
            *c += x * y;
        }
        rhs += b * y;
    }
    ensure(comb.iter().all(Zero::is_zero) && !rhs.is_zero(), "recombined certificate is not a contradiction")?;
    let used = certificate.eq.iter().filter(|y| !y.is_zero()).count();
    Ok(format!("Infeasible; certificate combines {used} of {} equations to 0 = {rhs}", system.equalities.len()))
}

fn random_submodular(n: usize, rng: &mut ChaCha8Rng) -> SetFunction {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.6) {
                edges.push((u, v, int(rng.gen_range(1..=4))));
            }
        }
    }
    let cut = sm::cut_function(&WeightedGraph { n, edges });
    let modular: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    let concave: Vec<i64> = {
        let mut inc: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        inc.sort_by(|a, b| b.cmp(a));
        inc
    };
    SetFunction::from_fn(n, |m| {
        let k = m.count_ones() as usize;
        let conc: i64 = concave[..k].iter().sum();
        let md: i64 = (0..n).filter(|i| m >> i & 1 == 1).map(|i| modular[i]).sum();
        &cut.values[m] + int(conc + md)
    })
}

fn c6_submodular() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut sub = 0;
    for i in 0..50 {
        let f = if i % 2 == 0 { sm::random_set_function(4, &mut rng) } else { random_submodular(4, &mut rng) };
        let l = sm::lovasz(&f).map_err(err)?;
        let s = sm::is_submodular(&f);
        ensure(s == l.is_convex(), format!("function {i}: submodular {s} but convex {}", l.is_convex()))?;
        ensure(s == sm::is_submodular_brute(&f), format!("function {i}: local and global criteria differ"))?;
        ensure(sm::to_set_function(&l).map_err(err)? == f, format!("function {i}: round trip"))?;
        sub += s as usize;
    }
    let mut graphs = 0;
    for i in 0..20 {
        let n = 3 + i % 3;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.7) {
                    let w = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
                    edges.push((u, v, int(w)));
                }
            }
        }
        let g = WeightedGraph { n, edges };
        let f = sm::cut_function(&g);
        let d = sm::decompose_set_function(&f).map_err(err)?;
        let (gp, gn) = sm::cut_sign_split(&g);
        ensure(d.g.eq_mod_modular(&gp) && d.h.eq_mod_modular(&gn), format!("graph {i}: decomposition differs from the sign split"))?;
        for part in [&d.g, &d.h] {
            let count = sm::greedy_vertices(part).map_err(err)?.len();
            let pieces = sm::lovasz(part).map_err(err)?.coarsen().map_err(err)?.piece_count;
            ensure(count == pieces, format!("graph {i}: {count} greedy vertices vs {pieces} pieces"))?;
        }
        graphs += 1;
    }
    Ok(format!("50/50 agree ({sub} submodular) with exact round trips; {graphs} signed graphs match the sign split with greedy counts = pieces"))
}

fn random_convex(rng: &mut ChaCha8Rng) -> Cpwl {
    loop {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=8);
        let maps: Vec<AffineMap> = (0..k)
            .map(|_| AffineMap::new((0..n).map(|_| int(rng.gen_range(-3..=3))).collect(), int(rng.gen_range(-4..=4))))
            .collect();
        if let Ok(f) = fixtures::max_affine(n, &maps) {
            return f;
        }
    }
}

fn check_net(net: &nn::ReluNetwork, f: &Cpwl, n: usize, r: usize, s: usize, seed: u64) -> Result<(), String> {
    let rep = nn::verify(net, f, 100, seed);
    ensure(rep.pass(), format!("{} exact mismatches", rep.mismatches.len()))?;
    ensure(rep.checked >= 100 + f.complex.cells.len(), "too few sample points")?;
    ensure(net.depth() == nn::grouped_depth(n, r, s), format!("depth {} != formula {}", net.depth(), nn::grouped_depth(n, r, s)))
}

fn c7_networks() -> Check {
    let f = fixtures::median();
    let p = dec::minimal_set(&f).map_err(err)?.remove(0);
    let k = nn::components(&p.g).len().max(nn::components(&p.h).len());
    let mut nets = 0;
    for (r, s) in [(1, k), (k, 1), (2, 2)] {
        check_net(&nn::dc_network(&p.g, &p.h, r, s).map_err(err)?, &f, 2, r, s, 7).map_err(|e| format!("median r={r}: {e}"))?;
        for part in [&p.g, &p.h] {
            check_net(&nn::grouped_convex(part, r, s).map_err(err)?, part, 2, r, s, 8).map_err(|e| format!("minimal part r={r}: {e}"))?;
        }
        nets += 3;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..25 {
        let f = random_convex(&mut rng);
        let n = f.dim();
        let k = nn::components(&f).len();
        let mid = rng.gen_range(1..=k);
        for r in [1, k, mid] {
            let s = k.div_ceil(r);
            let net = nn::grouped_convex(&f, r, s).map_err(err)?;
            check_net(&net, &f, n, r, s, 100 + i).map_err(|e| format!("random {i} (n={n}, k={k}, r={r}): {e}"))?;
            nets += 1;
        }
    }
    Ok(format!("{nets} networks exact on 100 seeded samples plus cell and facet points; depths match the formula"))
}

/// Vertices of `{λ ≥ 0, λ ≥ ω_f}` in one dimension by choosing a tight constraint per breakpoint.
fn brute_force_1d(wf: &[Rat]) -> BTreeSet<Vec<Rat>> {
    let m = wf.len();
    (0..1usize << m)
        .map(|mask| (0..m).map(|i| if mask >> i & 1 == 1 { wf[i].clone() } else { Rat::zero() }).collect::<Vec<_>>())
        .filter(|l| l.iter().zip(wf).all(|(x, w)| !x.is_negative() && x >= w))
        .collect()
}

fn fixture_suite() -> Result<Vec<(&'static str, Cpwl)>, String> {
    let six = Arc::new(fixtures::six_fan());
    let wf = WeightedFan2D::new(&fixtures::TRAN_RAYS, &fixtures::tran_weights()).map_err(err)?;
    let tran = constructions::tran2d_minimal(&wf).map_err(err)?;
    Ok(vec![
        ("median", fixtures::median()),
        ("max(x1,x2,0)", fixtures::max_x1_x2_0(six.clone())),
        ("zero", Cpwl::zero(six)),
        ("relu", fixtures::max_of(Arc::new(fixtures::halfplanes()), &[AffineMap::new(ints(&[1, 0]), int(0)), AffineMap::zero(2)])),
        ("tran", wf.function().map_err(err)?),
        ("tran augmented", tran.construction.f),
        ("order statistic 3", constructions::order_statistic(3, 2).map_err(err)?.f),
        ("order statistic 4", constructions::order_statistic(4, 2).map_err(err)?.f),
        ("median extension complex", constructions::hyperplane_extension(&fixtures::median()).map_err(err)?.f),
        ("counterexample", fixtures::counterexample_function()),
    ])
}

fn c8_structure() -> Check {
    // the 3D counterexample has 84 inequalities, above the default enumeration cap
    let big = Caps { enum_ineqs: 100, enum_dim: 40, ..Caps::default() };
    let mut checked = 0;
    for (name, f) in fixture_suite()? {
        let p = dec::solve_reduced(&f).map_err(err)?;
        ensure(dec::is_reduced(&p), format!("{name}: reduced LP output is not reduced"))?;
        let verts = dec::enumerate_with(&f, &big).map_err(err)?;
        let minimal = dec::minimal_set_with(&f, &big).map_err(err)?;
        ensure(minimal.iter().all(|m| verts.iter().any(|v| v.wg == m.wg)), format!("{name}: minimal point outside the vertex set"))?;
        let w = f.weights();
        let back = Cpwl::from_weights(&w, f.complex.clone(), 0).map_err(err)?;
        ensure(back.eq_mod_affine(&f) && back.weights() == w, format!("{name}: weights round trip"))?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut lines = 0;
    for m in 0..=6usize {
        for _ in 0..6 {
            let mut bps: BTreeSet<Rat> = BTreeSet::new();
            while bps.len() < m {
                bps.insert(frac(rng.gen_range(-20..=20), rng.gen_range(1..=3)));
            }
            let bps: Vec<Rat> = bps.into_iter().collect();
            let kinks: Vec<Rat> = (0..m).map(|_| int(rng.gen_range(-3..=3))).collect();
            let f = fixtures::line_function(&bps, &kinks).map_err(err)?;
            let got: BTreeSet<Vec<Rat>> = dec::enumerate(&f).map_err(err)?.into_iter().map(|p| p.wg).collect();
            ensure(got == brute_force_1d(&f.weights()), format!("1D oracle mismatch with {m} breakpoints"))?;
            let back = Cpwl::from_weights(&f.weights(), f.complex.clone(), 0).map_err(err)?;
            ensure(back.eq_mod_affine(&f), "1D weights round trip")?;
            lines += 1;
        }
    }
    Ok(format!("{checked} fixtures reduced, minimal within vertices, weights round trip; {lines} 1D functions match the brute-force oracle"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 8] = [
        ("median fixture", c1_median),
        ("order statistics", c2_order_statistics),
        ("hyperplane extension and local maxima", c3_constructions),
        ("minimal planar construction", c4_tran),
        ("polygon gluing counterexample", c5_counterexample),
        ("submodular bridge", c6_submodular),
        ("network emission", c7_networks),
        ("structural checks", c8_structure),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = std::time::Instant::now();
        let res = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
