//! Mesher for pants-complex cells.
//!
//! Every pants in a cell is congruent (all cuffs share the length `l`), so
//! each patch type is meshed once in canonical coordinates and instanced per
//! pants and cuff.  A pants decomposes into, per cuff: a full annulus band
//! `r in [0, r_cut]` around the cuff circle, and a front and back quad from
//! `r_cut` up to the chord geodesic between the two flanking seam midpoints;
//! plus, per hexagon side, three apex triangles from the chords to the
//! hexagon center.  Quads of one cuff meet quads of the neighboring cuffs
//! along the seam verticals; everything meets everything else through shared
//! structural node keys, which keeps the instanced meshes conforming and
//! exactly symmetric under the cell's cyclic isometry.

use hyp_geom::disk::{dist, point_along, LineFrame};
use hyp_geom::{CellSpec, Topology};
use num_complex::Complex64;

use crate::build::{finish_mesh, Key, MeshBuilder};
use crate::pants::{pants_geometry, PantsGeometry};
use crate::{BoundaryLoop, Cut, CutKind, DiskMesh, FemError, MeshOpts};

struct Sizes {
    n_arc: usize,
    n_cuff: usize,
    r_cut: f64,
    n_ann: usize,
    /// Column count per annulus row `0..=n_ann` (row 0 is the cuff circle).
    ann_cols: Vec<usize>,
    n_q: usize,
    n_apex: usize,
    /// Interval count per apex row `0..=n_apex` (row 0 spans the chord,
    /// the last row collapses to the hexagon center).
    apex_cols: Vec<usize>,
    fun_rows: usize,
    fun_r: Vec<f64>,
    fun_cols: Vec<usize>,
}

impl Sizes {
    fn compute(geom: &PantsGeometry, opts: &MeshOpts, wants_funnels: bool) -> Sizes {
        let h = opts.target_h;
        let l = geom.l;
        // Columns sized for the widest row they serve (the quad tops at
        // height b/2); r_cut keeps the annulus inside the collar, clear of
        // the seams, and strictly below the chord sag.
        let r_cut = (0.75 * geom.m).min(0.4 * geom.b).min(0.8 * geom.chord_min);
        let mut n_arc = ((geom.a * geom.h_top.cosh() / h).ceil() as usize).max(2);

        // Optional grading: halve circle columns toward the cuff while the
        // circumference shrinks, keeping at least 8 columns per circle.
        let graded_on = opts.graded && r_cut.cosh() > 4.0;
        let mut beta_max = 0usize;
        if graded_on {
            beta_max = r_cut.cosh().log2().floor() as usize;
            let avail = ((2 * n_arc) as f64 / 8.0).log2().floor().max(0.0) as usize;
            beta_max = beta_max.min(avail);
            if beta_max > 1 {
                // Round up so every halved count divides evenly.
                let q = 1usize << (beta_max - 1);
                n_arc = n_arc.div_ceil(q) * q;
            }
        }
        let n_cuff = 2 * n_arc;
        let n_ann = ((r_cut / h).ceil() as usize).max(2);
        let ann_cols: Vec<usize> = (0..=n_ann)
            .map(|j| {
                let r_j = r_cut * (j as f64 / n_ann as f64);
                let beta = if graded_on {
                    ((r_cut.cosh() / r_j.cosh()).log2().floor().max(0.0) as usize).min(beta_max)
                } else {
                    0
                };
                n_cuff >> beta
            })
            .collect();

        let n_q = (((geom.h_top - r_cut) / h).ceil() as usize).max(2);

        let chord_mid = point_along(geom.mu[1], geom.mu[2], 0.5 * dist(geom.mu[1], geom.mu[2]));
        let depth = dist(chord_mid, geom.p_star);
        let n_apex = ((depth / h).ceil() as usize).max(2).min(n_arc);
        let apex_cols: Vec<usize> = (0..=n_apex)
            .map(|k| {
                if k == n_apex {
                    0
                } else {
                    let m = (n_arc as f64 * (1.0 - k as f64 / n_apex as f64)).round() as usize;
                    m.max(1)
                }
            })
            .collect();

        let (fun_rows, fun_r, fun_cols) = if wants_funnels {
            let rows = ((opts.r_trunc / h).ceil() as usize).max(2);
            let r: Vec<f64> =
                (0..=rows).map(|j| opts.r_trunc * (j as f64 / rows as f64)).collect();
            let mut cols = Vec::with_capacity(rows + 1);
            cols.push(ann_cols[0]);
            for j in 1..=rows {
                let ideal = (l * r[j].cosh() / h).ceil() as usize;
                cols.push(ideal.max(cols[j - 1]));
            }
            (rows, r, cols)
        } else {
            (0, vec![], vec![])
        };

        Sizes { n_arc, n_cuff, r_cut, n_ann, ann_cols, n_q, n_apex, apex_cols, fun_rows, fun_r, fun_cols }
    }
}

/// Canonical patch coordinates, instanced per pants (and per cuff).
struct Canonical {
    /// `[j][0..=n_j]` annulus rows, wrap node repeated at `t = l`.
    ann_rows: Vec<Vec<Complex64>>,
    /// `[j][0..=n_arc]` quad rows from `r_cut` (row 0) to the chord (row `n_q`).
    quad_rows: Vec<Vec<Complex64>>,
    /// `[k][0..=m_k]` apex rows from the chord to the center.
    apex_rows: Vec<Vec<Complex64>>,
    /// `[j][0..=n_j]` funnel rows from the circle (row 0) outward, wrap repeated.
    fun_rows_z: Vec<Vec<Complex64>>,
}

fn bisect_chord_param(chord: &LineFrame, target_t: f64, s_hi: f64) -> f64 {
    // foot_t along the chord is monotone between its endpoints.
    let axis = LineFrame::AXIS;
    let (mut lo, mut hi) = (0.0f64, s_hi);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if axis.foot_t(chord.embed(mid, 0.0)) < target_t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn canonical_patches(geom: &PantsGeometry, s: &Sizes) -> Canonical {
    let axis = LineFrame::AXIS;
    let l = geom.l;

    let ann_rows: Vec<Vec<Complex64>> = (0..=s.n_ann)
        .map(|j| {
            let r_j = s.r_cut * (j as f64 / s.n_ann as f64);
            let n_j = s.ann_cols[j];
            (0..=n_j).map(|i| axis.embed(l * (i as f64 / n_j as f64), r_j)).collect()
        })
        .collect();

    let chord_frame = geom.chord_frame();
    let chord_len = dist(geom.mu[1], geom.mu[2]);
    let n_arc = s.n_arc;
    let mut s_knots = vec![0.0; n_arc + 1];
    let mut chord = vec![Complex64::new(0.0, 0.0); n_arc + 1];
    let mut r_top = vec![geom.h_top; n_arc + 1];
    chord[0] = geom.mu[1];
    chord[n_arc] = geom.mu[2];
    s_knots[n_arc] = chord_len;
    for i in 1..n_arc {
        let t_i = geom.a * (i as f64 / n_arc as f64);
        let sp = bisect_chord_param(&chord_frame, t_i, chord_len);
        s_knots[i] = sp;
        let z = chord_frame.embed(sp, 0.0);
        chord[i] = z;
        r_top[i] = axis.signed_r(z);
    }

    let quad_rows: Vec<Vec<Complex64>> = (0..=s.n_q)
        .map(|j| {
            if j == s.n_q {
                return chord.clone();
            }
            let f = j as f64 / s.n_q as f64;
            (0..=n_arc)
                .map(|i| {
                    let t_i = geom.a * (i as f64 / n_arc as f64);
                    axis.embed(t_i, s.r_cut + (r_top[i] - s.r_cut) * f)
                })
                .collect()
        })
        .collect();

    let apex_rows: Vec<Vec<Complex64>> = (0..=s.n_apex)
        .map(|k| {
            if k == 0 {
                return chord.clone();
            }
            if k == s.n_apex {
                return vec![geom.p_star];
            }
            let m_k = s.apex_cols[k];
            let f = k as f64 / s.n_apex as f64;
            (0..=m_k)
                .map(|i| {
                    let anchor = if i == 0 {
                        chord[0]
                    } else if i == m_k {
                        chord[n_arc]
                    } else {
                        let u = (i as f64 / m_k as f64) * n_arc as f64;
                        let i0 = (u.floor() as usize).min(n_arc - 1);
                        let frac = u - i0 as f64;
                        let sp = s_knots[i0] * (1.0 - frac) + s_knots[i0 + 1] * frac;
                        chord_frame.embed(sp, 0.0)
                    };
                    point_along(anchor, geom.p_star, dist(anchor, geom.p_star) * f)
                })
                .collect()
        })
        .collect();

    let fun_rows_z: Vec<Vec<Complex64>> = (0..=s.fun_rows)
        .map(|j| {
            if s.fun_rows == 0 {
                return vec![];
            }
            let n_j = s.fun_cols[j];
            let r_j = -s.fun_r[j];
            (0..=n_j).map(|i| axis.embed(l * (i as f64 / n_j as f64), r_j)).collect()
        })
        .collect();

    Canonical { ann_rows, quad_rows, apex_rows, fun_rows_z }
}

#[derive(Clone, Copy)]
enum Role {
    Glued { canon: (u16, u8), flip: bool },
    Hole,
}

fn seam_pair(c: u8, back: bool) -> (u8, u8) {
    let s1 = (c + 1) % 3;
    let s2 = (c + 2) % 3;
    if back {
        (s2, s1)
    } else {
        (s1, s2)
    }
}

/// Seam lateral columns `(seam, end)` flanking quad `c`'s two sides.  The
/// `t = 0` corner of cuff `c` belongs to seam `c+1` at its `end = 1` corner,
/// the `t = a` corner to seam `c+2` at `end = 0`; the back quad meets the
/// same two columns in swapped order.
fn lat_pair(c: u8, back: bool) -> ((u8, u8), (u8, u8)) {
    let low = ((c + 1) % 3, 1u8);
    let high = ((c + 2) % 3, 0u8);
    if back {
        (high, low)
    } else {
        (low, high)
    }
}

fn quad_key(p: u16, c: u8, back: bool, s: &Sizes, i: usize, j: usize) -> Key {
    let (s_l, s_r) = seam_pair(c, back);
    let (lat_l, lat_r) = lat_pair(c, back);
    if j == 0 {
        let col = if back { (i + s.n_arc) % s.n_cuff } else { i };
        Key::AnnRow { pants: p, slot: c, j: s.n_ann as u16, i: col as u32 }
    } else if j == s.n_q {
        if i == 0 {
            Key::SeamMid { pants: p, seam: s_l }
        } else if i == s.n_arc {
            Key::SeamMid { pants: p, seam: s_r }
        } else {
            Key::Chord { pants: p, cuff: c, back, i: i as u16 }
        }
    } else if i == 0 {
        Key::SeamLat { pants: p, seam: lat_l.0, end: lat_l.1, j: j as u16 }
    } else if i == s.n_arc {
        Key::SeamLat { pants: p, seam: lat_r.0, end: lat_r.1, j: j as u16 }
    } else {
        Key::QuadInt { pants: p, cuff: c, back, i: i as u16, j: j as u16 }
    }
}

fn apex_key(p: u16, c: u8, back: bool, s: &Sizes, k: usize, i: usize) -> Key {
    let (s_l, s_r) = seam_pair(c, back);
    let m_k = s.apex_cols[k];
    if k == 0 {
        if i == 0 {
            Key::SeamMid { pants: p, seam: s_l }
        } else if i == m_k {
            Key::SeamMid { pants: p, seam: s_r }
        } else {
            Key::Chord { pants: p, cuff: c, back, i: i as u16 }
        }
    } else if k == s.n_apex {
        Key::Center { pants: p, back }
    } else if i == 0 {
        Key::Radial { pants: p, seam: s_l, back, k: k as u16 }
    } else if i == m_k {
        Key::Radial { pants: p, seam: s_r, back, k: k as u16 }
    } else {
        Key::ApexInt { pants: p, cuff: c, back, k: k as u16, i: i as u16 }
    }
}

/// Key image under the cell's order-`v` isometry.
fn key_image(key: Key, topo: &Topology, v: u16) -> Key {
    let rot3 = |x: u8| (x + 1) % 3;
    match topo {
        Topology::PantsRing => match key {
            Key::Cuff { pants, slot, i } => Key::Cuff { pants, slot: rot3(slot), i },
            Key::AnnRow { pants, slot, j, i } => Key::AnnRow { pants, slot: rot3(slot), j, i },
            Key::SeamLat { pants, seam, end, j } => {
                Key::SeamLat { pants, seam: rot3(seam), end, j }
            }
            Key::SeamMid { pants, seam } => Key::SeamMid { pants, seam: rot3(seam) },
            Key::QuadInt { pants, cuff, back, i, j } => {
                Key::QuadInt { pants, cuff: rot3(cuff), back, i, j }
            }
            Key::Chord { pants, cuff, back, i } => Key::Chord { pants, cuff: rot3(cuff), back, i },
            Key::ApexInt { pants, cuff, back, k, i } => {
                Key::ApexInt { pants, cuff: rot3(cuff), back, k, i }
            }
            Key::Radial { pants, seam, back, k } => {
                Key::Radial { pants, seam: rot3(seam), back, k }
            }
            Key::Center { pants, back } => Key::Center { pants, back },
            Key::Funnel { pants, slot, j, i } => Key::Funnel { pants, slot: rot3(slot), j, i },
            Key::Grid { .. } => key,
        },
        _ => {
            let rotp = |p: u16| (p + 1) % v;
            match key {
                Key::Cuff { pants, slot, i } => Key::Cuff { pants: rotp(pants), slot, i },
                Key::AnnRow { pants, slot, j, i } => {
                    Key::AnnRow { pants: rotp(pants), slot, j, i }
                }
                Key::SeamLat { pants, seam, end, j } => {
                    Key::SeamLat { pants: rotp(pants), seam, end, j }
                }
                Key::SeamMid { pants, seam } => Key::SeamMid { pants: rotp(pants), seam },
                Key::QuadInt { pants, cuff, back, i, j } => {
                    Key::QuadInt { pants: rotp(pants), cuff, back, i, j }
                }
                Key::Chord { pants, cuff, back, i } => {
                    Key::Chord { pants: rotp(pants), cuff, back, i }
                }
                Key::ApexInt { pants, cuff, back, k, i } => {
                    Key::ApexInt { pants: rotp(pants), cuff, back, k, i }
                }
                Key::Radial { pants, seam, back, k } => {
                    Key::Radial { pants: rotp(pants), seam, back, k }
                }
                Key::Center { pants, back } => Key::Center { pants: rotp(pants), back },
                Key::Funnel { pants, slot, j, i } => {
                    Key::Funnel { pants: rotp(pants), slot, j, i }
                }
                Key::Grid { .. } => key,
            }
        }
    }
}

/// Meshes one repeated cell.
///
/// Boundary cuffs become [`BoundaryLoop`]s in hole order (ids `1..=v`);
/// funneled cuffs additionally carry a funnel band ending in a
/// [`CutKind::FunnelTruncation`] at depth `opts.r_trunc`.  The mesh records
/// the cyclic symmetry permutation for the preset topologies and, for every
/// boundary loop, each node's distance to that cuff geodesic (see
/// [`DiskMesh::cuff_dist`]).
pub fn mesh_cell(spec: &CellSpec, opts: &MeshOpts) -> Result<DiskMesh, FemError> {
    spec.validate()?;
    if !(opts.target_h > 0.0 && opts.target_h.is_finite()) {
        return Err(FemError::BadMeshSize(opts.target_h));
    }
    let l = spec.cuff_length;
    if l < 0.01 && !opts.graded {
        return Err(FemError::NeedsGraded(l));
    }
    let wants_funnels = (0..spec.v).any(|i| spec.funnel(i));
    if wants_funnels && !(opts.r_trunc > 0.0 && opts.r_trunc.is_finite()) {
        return Err(FemError::BadTruncation(opts.r_trunc));
    }

    let geom = pants_geometry(l)?;
    let sizes = Sizes::compute(&geom, opts, wants_funnels);
    let canon = canonical_patches(&geom, &sizes);
    let (n_pants, pairings, holes) = spec.pants_graph();

    let mut roles = vec![[Role::Hole; 3]; n_pants];
    for pair in &pairings {
        let canon_side = (pair[0][0] as u16, pair[0][1] as u8);
        roles[pair[0][0]][pair[0][1]] = Role::Glued { canon: canon_side, flip: false };
        roles[pair[1][0]][pair[1][1]] = Role::Glued { canon: canon_side, flip: true };
    }

    let n0 = sizes.ann_cols[0] as u32;
    let circle_key = |p: usize, slot: usize, i: u32| -> Key {
        let i = i % n0;
        match roles[p][slot] {
            Role::Glued { canon, flip } => {
                let ii = if flip { (n0 - i) % n0 } else { i };
                Key::Cuff { pants: canon.0, slot: canon.1, i: ii }
            }
            Role::Hole => Key::Cuff { pants: p as u16, slot: slot as u8, i },
        }
    };
    let chart_front = |p: usize, c: usize| (6 * p + c) as u32;
    let chart_back = |p: usize, c: usize| (6 * p + 3 + c) as u32;

    let mut b = MeshBuilder::new();

    // Annuli: full bands around every cuff circle of every pants.
    for p in 0..n_pants {
        for c in 0..3usize {
            let chart = chart_front(p, c);
            let mut prev: Vec<(u32, Complex64)> = canon.ann_rows[0]
                .iter()
                .enumerate()
                .map(|(i, &z)| (b.node(circle_key(p, c, i as u32), chart, z), z))
                .collect();
            for j in 1..=sizes.n_ann {
                let n_j = sizes.ann_cols[j];
                let row: Vec<(u32, Complex64)> = canon.ann_rows[j]
                    .iter()
                    .enumerate()
                    .map(|(i, &z)| {
                        let key = Key::AnnRow {
                            pants: p as u16,
                            slot: c as u8,
                            j: j as u16,
                            i: (i % n_j) as u32,
                        };
                        (b.node(key, chart, z), z)
                    })
                    .collect();
                b.stitch(&prev, &row)?;
                prev = row;
            }
        }
    }

    // Quads and apexes, front then back per cuff.
    for p in 0..n_pants {
        for &back in &[false, true] {
            for c in 0..3usize {
                let chart = if back { chart_back(p, c) } else { chart_front(p, c) };
                let mut prev: Option<Vec<(u32, Complex64)>> = None;
                for j in 0..=sizes.n_q {
                    let row: Vec<(u32, Complex64)> = canon.quad_rows[j]
                        .iter()
                        .enumerate()
                        .map(|(i, &z)| {
                            (b.node(quad_key(p as u16, c as u8, back, &sizes, i, j), chart, z), z)
                        })
                        .collect();
                    if let Some(pr) = prev {
                        b.stitch(&pr, &row)?;
                    }
                    prev = Some(row);
                }
            }
            for c in 0..3usize {
                let chart = if back { chart_back(p, c) } else { chart_front(p, c) };
                let mut prev: Option<Vec<(u32, Complex64)>> = None;
                for k in 0..=sizes.n_apex {
                    let row: Vec<(u32, Complex64)> = canon.apex_rows[k]
                        .iter()
                        .enumerate()
                        .map(|(i, &z)| {
                            (b.node(apex_key(p as u16, c as u8, back, &sizes, k, i), chart, z), z)
                        })
                        .collect();
                    if let Some(pr) = prev {
                        b.stitch(&pr, &row)?;
                    }
                    prev = Some(row);
                }
            }
        }
    }

    // Funnel bands on funneled holes.
    let mut cuts = Vec::new();
    for (idx, &[p, s]) in holes.iter().enumerate() {
        if !spec.funnel(idx) {
            continue;
        }
        let chart = chart_front(p, s);
        let mut prev: Vec<(u32, Complex64)> = canon.fun_rows_z[0]
            .iter()
            .enumerate()
            .map(|(i, &z)| (b.node(circle_key(p, s, i as u32), chart, z), z))
            .collect();
        for j in 1..=sizes.fun_rows {
            let n_j = sizes.fun_cols[j];
            let row: Vec<(u32, Complex64)> = canon.fun_rows_z[j]
                .iter()
                .enumerate()
                .map(|(i, &z)| {
                    let key = Key::Funnel {
                        pants: p as u16,
                        slot: s as u8,
                        j: j as u16,
                        i: (i % n_j) as u32,
                    };
                    (b.node(key, chart, z), z)
                })
                .collect();
            b.stitch(&prev, &row)?;
            prev = row;
        }
        cuts.push(Cut {
            kind: CutKind::FunnelTruncation { boundary: idx + 1 },
            nodes: prev[..sizes.fun_cols[sizes.fun_rows]].iter().map(|&(id, _)| id).collect(),
        });
    }

    // Boundary loops in hole order.
    let mut boundary_loops = Vec::with_capacity(holes.len());
    for (idx, &[p, s]) in holes.iter().enumerate() {
        let nodes: Vec<u32> = (0..n0)
            .map(|i| {
                b.lookup(&circle_key(p, s, i))
                    .ok_or(FemError::Internal("hole circle node missing"))
            })
            .collect::<Result<_, _>>()?;
        let params: Vec<f64> = (0..n0).map(|i| l * (i as f64 / n0 as f64)).collect();
        boundary_loops.push(BoundaryLoop {
            id: idx + 1,
            nodes,
            params,
            circumference: l,
            funneled: spec.funnel(idx),
        });
    }

    // Cyclic symmetry for the preset topologies; a non-uniform funnel
    // assignment breaks it.
    let funnels_uniform = (1..spec.v).all(|i| spec.funnel(i) == spec.funnel(0));
    let symmetry = match &spec.topology {
        Topology::Custom { .. } => None,
        _ if !funnels_uniform => None,
        topo => {
            let mut perm = vec![0u32; b.vertices.len()];
            for (key, &id) in b.keys() {
                let img = key_image(*key, topo, spec.v as u16);
                let img_id = b
                    .lookup(&img)
                    .ok_or(FemError::Internal("symmetry image key missing"))?;
                perm[id as usize] = img_id;
            }
            Some(perm)
        }
    };

    // Distance from every node to each boundary cuff's geodesic: exact via
    // the owning chart within the cuff's own pants.  A node of any other
    // pants is at least a full seam away (the seam is the common
    // perpendicular between cuff lines, and both quad columns and funnels
    // stay within half a seam of their own cuff), and the seam exceeds the
    // collar width, so infinity is a faithful stand-in there.
    let cuff_dist = {
        let mut all = Vec::with_capacity(holes.len());
        for &[hp, hs] in &holes {
            let frame = &geom.cuff[hs];
            let col: Vec<f64> = (0..b.vertices.len())
                .map(|n| {
                    let chart_id = b.chart[n] as usize;
                    if chart_id / 6 != hp {
                        return f64::INFINITY;
                    }
                    let to_ref = geom.to_ref((chart_id % 6) as u8);
                    let v = b.vertices[n];
                    let z = to_ref.apply(Complex64::new(v[0], v[1]));
                    frame.signed_r(z).abs()
                })
                .collect();
            all.push(col);
        }
        Some(all)
    };

    let funnel_area: f64 = (0..holes.len())
        .filter(|&idx| spec.funnel(idx))
        .map(|_| l * opts.r_trunc.sinh())
        .sum();
    let expected = spec.core_volume() + funnel_area;
    // Circular bands in the cell keep their chords at or under `target_h`,
    // so the generic edge-length term already covers their arc deficit.
    finish_mesh(b, boundary_loops, cuts, expected, 0.0, symmetry, cuff_dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_spec(l: f64) -> CellSpec {
        CellSpec { v: 3, cuff_length: l, topology: Topology::PantsRing, funnels: vec![] }
    }

    #[test]
    fn sizes_shrink_with_h() {
        let geom = pants_geometry(1.0).unwrap();
        let coarse = Sizes::compute(&geom, &MeshOpts::new(0.2), false);
        let fine = Sizes::compute(&geom, &MeshOpts::new(0.1), false);
        assert!(fine.n_arc > coarse.n_arc);
        assert!(fine.n_ann > coarse.n_ann);
        assert_eq!(coarse.ann_cols[coarse.n_ann], coarse.n_cuff);
    }

    #[test]
    fn pants_ring_counts_and_area() {
        let expected = 2.0 * std::f64::consts::PI;
        let coarse = mesh_cell(&ring_spec(1.0), &MeshOpts::new(0.15)).unwrap();
        assert_eq!(coarse.boundary_loops.len(), 3);
        assert_eq!(coarse.euler_characteristic(), -1);
        let err_coarse = (coarse.hyperbolic_area - expected).abs() / expected;
        assert!(err_coarse < 0.012, "coarse area error {err_coarse}");

        // Quadratic convergence separates discretization error from any
        // resolution-independent defect like overlapping patches.
        let fine = mesh_cell(&ring_spec(1.0), &MeshOpts::new(0.075)).unwrap();
        let err_fine = (fine.hyperbolic_area - expected).abs() / expected;
        assert!(err_fine < err_coarse / 2.5, "errors {err_coarse} -> {err_fine}");
    }

    #[test]
    fn thin_cuff_requires_grading() {
        let err = mesh_cell(&ring_spec(0.005), &MeshOpts::new(0.1)).unwrap_err();
        assert!(matches!(err, FemError::NeedsGraded(_)));
    }
}
