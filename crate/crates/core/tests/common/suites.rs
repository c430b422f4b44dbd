//! Property suites and worked-example checks, shared with the acceptance run.

use nncomplete::nn3::End;
use nncomplete::{
    classify_one_missing, contains, decide_nn3_two_missing, family_11_21, family_11_22,
    hole_value_via_minor, int, nested_triangle, nn_rank2_pattern_equivalence, nn_rank_at_most_3,
    rank1_complete, rat, slack_matrix, support_graph, CompletionOutcome, HalfPlane, Matrix,
    NestedPair, PartialMatrix, Pattern, Point, Polygon2, Rational, Verdict,
};
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub fn random_hide<R: Rng>(rng: &mut R, m: &Matrix, pct: u32) -> PartialMatrix {
    let mut out = PartialMatrix::from_matrix(m);
    for i in 1..=m.rows() {
        for j in 1..=m.cols() {
            if rng.gen_ratio(pct, 100) {
                out.set(i, j, None);
            }
        }
    }
    out
}

pub fn rand_rank1<R: Rng>(rng: &mut R, p: usize, q: usize, zero_pct: u32) -> Matrix {
    let u = rand_nonneg_int(rng, p, 1, 5, zero_pct);
    let v = rand_nonneg_int(rng, 1, q, 5, zero_pct);
    u.mul(&v).unwrap()
}

/// Random rank-one nonnegative data under random patterns: the completion is
/// valid, and uniqueness agrees with the brute-force support oracle.
pub fn rank1_property_suite(n: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let (p, q) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let zero_pct = if rng.gen_bool(0.5) { 0 } else { 20 };
        let base = rand_rank1(&mut rng, p, q, zero_pct);
        let pct = rng.gen_range(10..70);
        let m = random_hide(&mut rng, &base, pct);
        let out = rank1_complete(&m, true).map_err(|e| e.to_string())?;
        let oracle = rank1_oracle(&m)
            .ok_or_else(|| format!("oracle says no completion\n{}", m.to_text()))?;
        let c = out
            .matrix()
            .ok_or_else(|| format!("no completion returned\n{}", m.to_text()))?;
        if !(m.agrees_with(c) && c.is_nonnegative() && minor_rank(c) <= 1) {
            return Err(format!("invalid completion\n{}\n{c}", m.to_text()));
        }
        let unique = matches!(out, CompletionOutcome::Unique(_));
        if unique != rank1_oracle_unique(&oracle) {
            return Err(format!("uniqueness disagrees ({unique})\n{}", m.to_text()));
        }
        let g = support_graph(&m);
        let all_positive = m.observed_entries().iter().all(|(_, _, v)| v.is_positive());
        if all_positive && !m.missing().is_empty() && unique != g.filtered_connected() {
            return Err(format!(
                "uniqueness disagrees with connectivity\n{}",
                m.to_text()
            ));
        }
        if let CompletionOutcome::Infinite { free, canonical } = &out {
            // each free entry can move while staying rank one
            for &(i, j) in free {
                if !oracle.iter().any(|f| f[&(i, j)].is_none())
                    && oracle.windows(2).all(|w| w[0][&(i, j)] == w[1][&(i, j)])
                {
                    return Err(format!(
                        "({i},{j}) marked free but pinned\n{}\n{canonical}",
                        m.to_text()
                    ));
                }
            }
        }
    }
    Ok(())
}

pub fn pattern_from_mask(mask: u32) -> Pattern {
    let missing: Vec<(usize, usize)> = (0..9)
        .filter(|k| mask & (1 << k) != 0)
        .map(|k| (k / 3 + 1, k % 3 + 1))
        .collect();
    Pattern::complement_of(3, 3, &missing).unwrap()
}

pub fn distinct_lines(mask: u32) -> bool {
    let cells: Vec<(usize, usize)> = (0..9)
        .filter(|k| mask & (1 << k) != 0)
        .map(|k| (k / 3, k % 3))
        .collect();
    !cells.is_empty()
        && cells
            .iter()
            .enumerate()
            .all(|(a, x)| cells[a + 1..].iter().all(|y| x.0 != y.0 && x.1 != y.1))
}

/// Every 3x3 pattern, against the distinct-rows-and-columns description.
pub fn pattern_characterization_holds() -> Result<usize, String> {
    let mut falses = 0;
    for mask in 0u32..512 {
        let got =
            nn_rank2_pattern_equivalence(&pattern_from_mask(mask)).map_err(|e| e.to_string())?;
        if got == distinct_lines(mask) {
            return Err(format!("mask {mask:09b}: got {got}"));
        }
        falses += usize::from(!got);
    }
    Ok(falses)
}

/// The diagonal example: `det = 1 + m11 m22 m33` on a rational grid.
pub fn diagonal_grid_determinants() -> Result<Rational, String> {
    let grid: Vec<Rational> = (0..=16).map(|k| rat(k, 4)).collect();
    let mut least: Option<Rational> = None;
    for a in &grid {
        for b in &grid {
            for c in &grid {
                let m = Matrix::from_rows(vec![
                    vec![a.clone(), int(0), int(1)],
                    vec![int(1), b.clone(), int(0)],
                    vec![int(0), int(1), c.clone()],
                ])
                .unwrap();
                let d = cofactor_det(&m);
                if d != int(1) + a * b * c {
                    return Err(format!("det formula off at ({a},{b},{c})"));
                }
                least = Some(least.map_or(d.clone(), |l: Rational| l.min(d)));
            }
        }
    }
    Ok(least.unwrap())
}

/// Trichotomy against the symbolic oracle, and minor-choice independence of
/// the Unique value.
pub fn one_missing_property_suite(n: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for it in 0..n {
        let (p, q) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let r: usize = rng.gen_range(1..=p.min(q));
        let k = match it % 3 {
            0 => r,
            1 => r.saturating_sub(1).max(1),
            _ => (r + 1).min(p.min(q)),
        };
        let full = rand_matrix(&mut rng, p, k, -2, 3)
            .mul(&rand_matrix(&mut rng, k, q, -2, 3))
            .unwrap();
        let hole = (rng.gen_range(1..=p), rng.gen_range(1..=q));
        let mut m = PartialMatrix::hide(&full, &[hole]).unwrap();
        if it % 5 == 0 {
            // knock the data off the variety
            let (i, j) = ((hole.0 % p) + 1, (hole.1 % q) + 1);
            if (i, j) != hole {
                m.set(i, j, Some(m.get(i, j).unwrap() + int(1)));
            }
        }
        let got = classify_one_missing(&m, hole, r).map_err(|e| e.to_string())?;
        let want = one_missing_oracle(&m, hole, r);
        let agree = match (&got, &want) {
            (CompletionOutcome::None, OneMissing::None) => true,
            (CompletionOutcome::Infinite { .. }, OneMissing::Infinite) => true,
            (CompletionOutcome::Unique(c), OneMissing::Unique(v)) => c.get(hole.0, hole.1) == v,
            _ => false,
        };
        if !agree {
            return Err(format!(
                "r={r} hole={hole:?}: {got:?} vs {want:?}\n{}",
                m.to_text()
            ));
        }
        if let Some(c) = got.matrix() {
            if !(m.agrees_with(c) && minor_rank(c) <= r) {
                return Err(format!("payload invalid\n{}", m.to_text()));
            }
        }
        if let CompletionOutcome::Unique(c) = &got {
            let rows: Vec<usize> = (1..=p).filter(|&x| x != hole.0).collect();
            let cols: Vec<usize> = (1..=q).filter(|&x| x != hole.1).collect();
            let f = m.fill_missing(&int(0));
            let mut used = 0;
            for kk in combos(rows.len(), r) {
                for ll in combos(cols.len(), r) {
                    let kr: Vec<usize> = kk.iter().map(|&a| rows[a - 1]).collect();
                    let lc: Vec<usize> = ll.iter().map(|&b| cols[b - 1]).collect();
                    if cofactor_det(&f.submatrix(&kr, &lc).unwrap()).is_zero() {
                        continue;
                    }
                    let v = hole_value_via_minor(&m, hole, &kr, &lc).map_err(|e| e.to_string())?;
                    if &v != c.get(hole.0, hole.1) {
                        return Err(format!("minor {kr:?}x{lc:?} gives {v}\n{}", m.to_text()));
                    }
                    used += 1;
                }
            }
            if used == 0 {
                return Err("Unique without a nonzero minor".into());
            }
        }
    }
    Ok(())
}

/// Product with the zero pattern of the boundary component.
pub fn boundary_pattern_product<R: Rng>(rng: &mut R) -> Matrix {
    let mut a = rand_nonneg_int(rng, 4, 3, 9, 0);
    for (i, j) in [(1, 1), (2, 2), (3, 3), (4, 3)] {
        a.set(i, j, int(0));
    }
    let mut b = rand_nonneg_int(rng, 3, 4, 9, 0);
    for (i, j) in [(1, 1), (2, 2), (3, 3)] {
        b.set(i, j, int(0));
    }
    let scale = |m: &mut Matrix, rng: &mut R| {
        for i in 1..=m.rows() {
            for j in 1..=m.cols() {
                let v = m.get(i, j) / int(rng.gen_range(1..=3));
                m.set(i, j, v);
            }
        }
    };
    scale(&mut a, rng);
    scale(&mut b, rng);
    a.mul(&b).unwrap()
}

/// Random pairs: nonnegative slack iff containment, and every triangle the
/// search returns re-verifies by orientation tests.
pub fn slack_and_triangle_suite(n: usize, seed: u64) -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut nested, mut triangles) = (0, 0);
    for _ in 0..n {
        let nq = rng.gen_range(3..=7);
        let q = rand_polygon(&mut rng, nq, int(0), int(0), 8);
        let r = rng.gen_range(2..=8);
        let (cx, cy) = (rat(rng.gen_range(-8..=8), 4), rat(rng.gen_range(-8..=8), 4));
        let np = rng.gen_range(3..=6);
        let p = rand_polygon(&mut rng, np, cx, cy, r);
        let pair = NestedPair::from_polygons(p.clone(), q.clone());
        let slack_ok = slack_matrix(&pair)
            .entries()
            .iter()
            .all(|x| !x.is_negative());
        let inside = polygon_inside(&q, &p);
        if slack_ok != inside || contains(&q, &p) != inside {
            return Err(format!(
                "slack {slack_ok} / contains {} / oracle {inside}",
                contains(&q, &p)
            ));
        }
        if !inside {
            continue;
        }
        nested += 1;
        if let Some(t) = nested_triangle(&pair).map_err(|e| e.to_string())? {
            if !(t.is_nested(&p, &q) && triangle_nested_oracle(&t, &p, &q)) {
                return Err(format!("triangle {:?} fails re-verification", t.vertices()));
            }
            triangles += 1;
        }
    }
    Ok((nested, triangles))
}

/// Pairs where the grid oracle finds a triangle must not be missed.
pub fn grid_oracle_suite(n: usize, seed: u64) -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut certified, mut tested) = (0, 0);
    while tested < n {
        let nq = rng.gen_range(4..=7);
        let q = rand_polygon(&mut rng, nq, int(0), int(0), 8);
        let r = rng.gen_range(3..=7);
        let np = rng.gen_range(3..=6);
        let p = rand_polygon(&mut rng, np, int(0), int(0), r);
        if !contains(&q, &p) {
            continue;
        }
        tested += 1;
        let pair = NestedPair::from_polygons(p.clone(), q.clone());
        let found = nested_triangle(&pair).map_err(|e| e.to_string())?;
        if let Some(t) = rotation_grid_triangle(&p, &q, 720) {
            certified += 1;
            if !triangle_nested_oracle(&t, &p, &q) {
                return Err("oracle produced a bad triangle".into());
            }
            if found.is_none() {
                return Err(format!(
                    "missed a triangle: P {:?} Q {:?}",
                    p.vertices(),
                    q.vertices()
                ));
            }
        }
    }
    Ok((certified, tested))
}

pub fn rank3_nonneg_candidate<R: Rng>(rng: &mut R) -> Matrix {
    if rng.gen_bool(0.5) {
        // a negative entry in one factor, kept only if the product stays nonnegative
        loop {
            let mut a = rand_nonneg_int(rng, 4, 3, 6, 25);
            let b = rand_nonneg_int(rng, 3, 4, 6, 25);
            let (i, j) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
            a.set(i, j, -rat(rng.gen_range(1..=6), 2));
            let m = a.mul(&b).unwrap();
            if m.is_nonnegative() && m.rank() == 3 {
                return m;
            }
        }
    }
    // slack of a polygon inside a slightly larger copy of itself
    let nq = rng.gen_range(4..=6);
    let q = rand_polygon(rng, nq, int(0), int(0), 8);
    let s = rat(rng.gen_range(24..=31), 32);
    let vs = q.vertices();
    let k = Rational::from_integer(vs.len().into());
    let c = vs
        .iter()
        .fold(pt(int(0), int(0)), |acc, v| acc.add(v))
        .scale(&(int(1) / k));
    let p = Polygon2::hull(
        &vs.iter()
            .map(|v| c.add(&v.sub(&c).scale(&s)))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    slack_matrix(&NestedPair::from_polygons(p, q))
}

/// Float multiplicative updates never find a size-3 factorization of a
/// matrix declared FALSE; TRUE verdicts come with exact witnesses.
pub fn nmf_oracle_suite(n: usize, seed: u64) -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut falses, mut trues) = (0, 0);
    for _ in 0..n {
        let m = rank3_nonneg_candidate(&mut rng);
        let v = nn_rank_at_most_3(&m).map_err(|e| e.to_string())?;
        if v.holds {
            let (w, h) = v.witness.ok_or("TRUE without witness")?;
            if !(w.is_nonnegative()
                && h.is_nonnegative()
                && w.mul(&h).unwrap() == m
                && w.cols() <= 3)
            {
                return Err(format!("bad witness for\n{m}"));
            }
            trues += 1;
        } else {
            let res = mu_nmf_residual(&mut rng, &m, 3, 8, 400);
            if res < 1e-9 {
                return Err(format!(
                    "numerical NMF reached residual {res:e} on a FALSE instance\n{m}"
                ));
            }
            falses += 1;
        }
    }
    Ok((falses, trues))
}

pub fn sorted(mut v: Vec<Point>) -> Vec<Point> {
    v.sort();
    v
}

/// Where the ray from `a` through `b` leaves `q`.
pub fn exit_point(q: &Polygon2, a: &Point, b: &Point) -> Point {
    let d = b.sub(a);
    let mut best: Option<Rational> = None;
    for h in q.facets() {
        let slope = &h.cx * &d.x + &h.cy * &d.y;
        if slope.is_negative() {
            let s = -h.eval(b) / slope;
            if best.as_ref().is_none_or(|x| &s < x) {
                best = Some(s);
            }
        }
    }
    b.add(&d.scale(&best.unwrap()))
}

pub struct Chain {
    pub v1: Point,
    pub v2: Point,
    pub w: Point,
    /// Meeting point of the first and last sides.
    pub close: Option<Point>,
}

/// Greedy chain around the fixed vertices: side through `p1,p4` to `v1`, then
/// through `p2` to `v2`, then through `p3` to `w`.
pub fn family_a_chain(q: &Polygon2, p1: &Point, p: &[Point; 3]) -> Chain {
    let [p2, p3, p4] = p;
    let v1 = exit_point(q, p1, p4);
    let v2 = exit_point(q, &v1, p2);
    let w = exit_point(q, &v2, p3);
    let close = HalfPlane::left_of(p1, &v1).meet(&HalfPlane::left_of(&v2, p3));
    Chain { v1, v2, w, close }
}

pub fn family_a_outer() -> [Point; 4] {
    [
        pq(1, 160, 11, 160),
        pq(11, 160, 1, 160),
        pq(13, 480, -17, 480),
        pq(-17, 480, 13, 480),
    ]
}

pub fn family_a_fixed_points() -> [Point; 3] {
    [pq(0, 1, 0, 1), pq(1, 20, 0, 1), pq(0, 1, 1, 20)]
}

/// Five critical positions of `p1`, from the start at `q2` to the limit `q1`.
pub fn family_a_critical() -> [Point; 5] {
    [
        pq(11, 160, 1, 160),
        pq(3, 160, 9, 160),
        pq(13, 800, 47, 800),
        pq(17, 1120, 67, 1120),
        pq(1, 160, 11, 160),
    ]
}

/// Family geometry and the five critical configurations of the first example.
pub fn family_a_checks() -> Result<(), String> {
    let fam = family_11_21(&family_a()).map_err(|e| e.to_string())?;
    let q = Polygon2::from_halfplanes(&fam.fixed_facets).map_err(|e| e.to_string())?;
    if sorted(q.vertices().to_vec()) != sorted(family_a_outer().to_vec()) {
        return Err(format!("Q vertices {:?}", q.vertices()));
    }
    if sorted(fam.fixed_points.clone()) != sorted(family_a_fixed_points().to_vec()) {
        return Err(format!("fixed P vertices {:?}", fam.fixed_points));
    }
    let on_edge = |x: &Point| (&x.x + &x.y - rat(3, 40)).is_zero();
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..20 {
        let t = rat(rng.gen_range(1..=400), rng.gen_range(1..=7));
        if !fam.is_feasible(&t) {
            continue;
        }
        let p1 = fam.moving_point(&t).ok_or("moving vertex at infinity")?;
        if !on_edge(&p1) {
            return Err(format!("p1({t}) = {p1:?} off x + y = 3/40"));
        }
    }
    let line = fam.printed_line_p1().ok_or("no printed line")?;
    let q34 = fam.facet_vertex_34().ok_or("facets 3 and 4 parallel")?;
    if !line.eval(&q34).is_zero() || !line.eval(&fam.moving_point(&int(3)).unwrap()).is_zero() {
        return Err("printed line misses q or p1".into());
    }
    let [_, q2, q3, q4] = family_a_outer();
    let fixed = family_a_fixed_points();
    let crit = family_a_critical();
    if fam.moving_point(&int(1)) != Some(crit[0].clone()) {
        return Err("p1(1) is not q2".into());
    }
    for (k, p1) in crit.iter().enumerate() {
        if !on_edge(p1) {
            return Err(format!("configuration {k} off the edge"));
        }
        if k < 4 {
            let t = fam
                .t_for_point(p1)
                .ok_or(format!("configuration {k} not reached"))?;
            if !fam.is_feasible(&t) {
                return Err(format!("configuration {k} at infeasible t = {t}"));
            }
        } else if fam.t_for_point(p1).is_some() {
            return Err("q1 reached at finite t".into());
        }
        let c = family_a_chain(&q, p1, &fixed);
        let closes = c.close.as_ref().is_some_and(|x| q.contains_point(x));
        if closes {
            return Err(format!("chain closes at configuration {k}"));
        }
        let hit = match k {
            1 => c.w == q2,
            2 => c.v2 == q3,
            3 => c.v1 == q4,
            _ => true,
        };
        if !hit {
            return Err(format!(
                "configuration {k} is not critical: {:?} {:?} {:?}",
                c.v1, c.v2, c.w
            ));
        }
    }
    let cert = decide_nn3_two_missing(&family_a()).map_err(|e| e.to_string())?;
    if cert.verdict != Verdict::NotCompletable || !cert.verify(&family_a()) {
        return Err(format!("verdict {:?} via {}", cert.verdict, cert.route));
    }
    Ok(())
}

pub fn family_b_end() -> Rational {
    rat(4284, 9959)
}

/// Feasible interval, containments and failed envelope search for the second example.
pub fn family_b_checks() -> Result<(), String> {
    let fam = family_11_22(&family_b()).map_err(|e| e.to_string())?;
    if fam.feasible.len() != 1 {
        return Err(format!("{} feasible pieces", fam.feasible.len()));
    }
    let iv = &fam.feasible[0];
    if iv.lo != End::At(int(0)) || iv.hi != End::At(family_b_end()) || iv.lo_open || iv.hi_open {
        return Err(format!("feasible {iv:?}"));
    }
    let (m0, mc) = (
        fam.member(&int(0)).map_err(|e| e.to_string())?,
        fam.member(&family_b_end()).map_err(|e| e.to_string())?,
    );
    if !contains(&m0.pair.inner, &mc.pair.inner) || !contains(&m0.pair.outer, &mc.pair.outer) {
        return Err("envelope containments fail".into());
    }
    let env = NestedPair::from_polygons(mc.pair.inner.clone(), m0.pair.outer.clone());
    if nested_triangle(&env).map_err(|e| e.to_string())?.is_some() {
        return Err("triangle between P_c and Q_0".into());
    }
    let cert = decide_nn3_two_missing(&family_b()).map_err(|e| e.to_string())?;
    if cert.verdict != Verdict::NotCompletable
        || cert.route != "envelope"
        || !cert.verify(&family_b())
    {
        return Err(format!("verdict {:?} via {}", cert.verdict, cert.route));
    }
    let piece = &cert.envelope[0];
    if cert.envelope.len() != 1
        || piece.lo != End::At(int(0))
        || piece.hi != End::At(family_b_end())
    {
        return Err("envelope piece bounds".into());
    }
    Ok(())
}

pub fn unique_hidden_checks() -> Result<(), String> {
    let m = unique_hidden();
    let fam = family_11_22(&m).map_err(|e| e.to_string())?;
    if fam.completion_at(&int(6)).map_err(|e| e.to_string())? != m_unique() {
        return Err("M_6 differs from the hidden matrix".into());
    }
    if fam
        .triangle_at(&int(6))
        .map_err(|e| e.to_string())?
        .is_none()
    {
        return Err("no triangle at the hidden value".into());
    }
    let cert = decide_nn3_two_missing(&m).map_err(|e| e.to_string())?;
    let c = cert.completion.clone().ok_or("no completion")?;
    if cert.verdict != Verdict::Completable || !cert.verify(&m) {
        return Err(format!("verdict {:?}", cert.verdict));
    }
    if !nn_rank_at_most_3(&c).map_err(|e| e.to_string())?.holds {
        return Err("returned completion has nonnegative rank above three".into());
    }
    Ok(())
}
