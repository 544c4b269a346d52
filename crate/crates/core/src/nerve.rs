//! The nerve `N` of an n-relative category, its left adjoint `K` computed
//! from the 2-skeleton, and checks on the unit and counit.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, ExplicitCategory, Functor, ObjId};
use crate::msset::{axis_tag, build_msset, indices, Cell, Monotone, MSSetMap, Operator, TruncatedMSSet};
use crate::prescat::{compare_presented_to_explicit, Budget, GeneratorMap, IsoReport, Path, Presentation, Realization, Tags};
use crate::relcat::{chain_tagged, product_nrel, search_relative_functors, NRelCategory, PresentedNRel};

pub const DEFAULT_MAX_NODES: u64 = 50_000_000;

/// `p_n^{v_n} × ⋯ × p_1^{v_1} × q^w` for the multi-index `m`.
pub fn standard_nrel(n: usize, m: &[usize]) -> NRelCategory {
    assert_eq!(m.len(), n + 1, "multi-index has n+1 degrees");
    let factors: Vec<NRelCategory> = m
        .iter()
        .enumerate()
        .map(|(axis, &d)| chain_tagged(d, axis_tag(n, axis), n))
        .collect();
    product_nrel(&factors).expect("factors share n")
}

/// Object of [`standard_nrel`] with the given coordinates.
pub fn grid_object(m: &[usize], coords: &[usize]) -> ObjId {
    m.iter().zip(coords).fold(0, |acc, (&d, &c)| acc * (d + 1) + c)
}

/// Coordinates of an object of [`standard_nrel`].
pub fn grid_coords(m: &[usize], mut o: ObjId) -> Vec<usize> {
    let mut out = vec![0; m.len()];
    for a in (0..m.len()).rev() {
        out[a] = o % (m[a] + 1);
        o /= m[a] + 1;
    }
    out
}

/// The relative functor `standard_nrel(k) → standard_nrel(m)` induced by an
/// operator `k → m`.
pub fn induced_functor(op: &Operator, source: &ExplicitCategory, target: &ExplicitCategory) -> Functor {
    let k = op.dom();
    let m = op.cod();
    let object_map: Vec<ObjId> = source
        .objects()
        .map(|o| {
            let c = grid_coords(&k, o);
            let image: Vec<usize> = c.iter().zip(&op.0).map(|(&v, t)| t.vals[v]).collect();
            grid_object(&m, &image)
        })
        .collect();
    let arrow_map = source
        .arrow_ids()
        .map(|a| target.hom(object_map[source.src(a)], object_map[source.tgt(a)])[0])
        .collect();
    Functor { object_map, arrow_map }
}

fn precompose(cell: &Functor, by: &Functor) -> Functor {
    Functor {
        object_map: by.object_map.iter().map(|&o| cell.object_map[o]).collect(),
        arrow_map: by.arrow_map.iter().map(|&a| cell.arrow_map[a]).collect(),
    }
}

/// The truncated nerve together with the relative functor behind each cell.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub msset: TruncatedMSSet,
    /// Cells at each flat index, in cell order.
    pub cells: Vec<Vec<Functor>>,
    lookup: Vec<HashMap<Functor, Cell>>,
}

impl Nerve {
    pub fn cell_of(&self, flat: usize, f: &Functor) -> Option<Cell> {
        self.lookup[flat].get(f).copied()
    }
}

/// `N C` with every degree `≤ bound`.
pub fn nerve(c: &NRelCategory, bound: usize, max_nodes: u64) -> Result<Nerve> {
    let n = c.n();
    let idx = indices(n + 1, bound);
    let grids: Vec<NRelCategory> = idx.iter().map(|m| standard_nrel(n, m)).collect();
    let mut cells: Vec<Vec<Functor>> = Vec::with_capacity(idx.len());
    for g in &grids {
        let mut found = Vec::new();
        search_relative_functors(g, c, max_nodes, &mut |f| found.push(f.clone()))?;
        found.sort();
        cells.push(found);
    }
    let flat_of = |m: &[usize]| m.iter().fold(0, |acc, &d| acc * (bound + 1) + d);
    // induced functors of the elementary operators, per (flat, axis, position)
    let mut cofaces: HashMap<(usize, usize, usize), Functor> = HashMap::new();
    let mut codegens: HashMap<(usize, usize, usize), Functor> = HashMap::new();
    for (flat, m) in idx.iter().enumerate() {
        for axis in 0..=n {
            if m[axis] > 0 {
                let mut below = m.clone();
                below[axis] -= 1;
                for i in 0..=m[axis] {
                    let op = Operator::elementary(m, axis, Monotone::coface(m[axis], i));
                    let f = induced_functor(&op, grids[flat_of(&below)].ambient(), grids[flat].ambient());
                    cofaces.insert((flat, axis, i), f);
                }
            }
            if m[axis] < bound {
                let mut above = m.clone();
                above[axis] += 1;
                for j in 0..=m[axis] {
                    let op = Operator::elementary(m, axis, Monotone::codegeneracy(m[axis], j));
                    let f = induced_functor(&op, grids[flat_of(&above)].ambient(), grids[flat].ambient());
                    codegens.insert((flat, axis, j), f);
                }
            }
        }
    }
    let amb = c.ambient();
    let poset = amb.is_poset();
    let covering: Vec<Vec<ArrowId>> = grids
        .iter()
        .zip(&idx)
        .map(|(g, m)| {
            g.ambient()
                .arrow_ids()
                .filter(|&a| {
                    let s = grid_coords(m, g.ambient().src(a));
                    let t = grid_coords(m, g.ambient().tgt(a));
                    s.iter().zip(&t).map(|(x, y)| y - x).sum::<usize>() == 1
                })
                .collect()
        })
        .collect();
    let msset = build_msset(
        n,
        bound,
        |m| {
            let flat = flat_of(m);
            cells[flat].iter().map(|f| (flat, f.clone())).collect()
        },
        |m, axis, i, (flat, f)| {
            let mut below = m.to_vec();
            below[axis] -= 1;
            (flat_of(&below), precompose(f, &cofaces[&(*flat, axis, i)]))
        },
        |m, axis, j, (flat, f)| {
            let mut above = m.to_vec();
            above[axis] += 1;
            (flat_of(&above), precompose(f, &codegens[&(*flat, axis, j)]))
        },
        |(flat, f)| {
            let objs: Vec<&str> = f.object_map.iter().map(|&o| amb.object_name(o)).collect();
            let mut name = objs.join(",");
            if !poset {
                let arrows: Vec<&str> = covering[*flat].iter().map(|&a| amb.arrow_name(f.arrow_map[a])).collect();
                name.push(':');
                name.push_str(&arrows.join(","));
            }
            name
        },
    );
    let lookup = cells
        .iter()
        .map(|cs| cs.iter().cloned().enumerate().map(|(i, f)| (f, i as Cell)).collect())
        .collect();
    Ok(Nerve { msset, cells, lookup })
}

/// `K X`, presented by the 2-skeleton of `X`.
#[derive(Clone, Debug)]
pub struct KAdjoint {
    pub nrel: PresentedNRel,
    /// The nondegenerate 1-cell `(flat, cell)` behind each generator.
    pub generator_cells: Vec<(usize, Cell)>,
    generator_of: HashMap<(usize, Cell), usize>,
}

impl KAdjoint {
    pub fn presentation(&self) -> &Presentation {
        &self.nrel.presentation
    }

    /// The path of a 1-cell: its generator, or an identity when degenerate.
    pub fn edge_path(&self, x: &TruncatedMSSet, flat: usize, c: Cell) -> Path {
        let m = x.multi(flat);
        let axis = m.iter().position(|&d| d == 1).expect("a 1-cell");
        let src = x.face(flat, axis, 1, c) as ObjId;
        match self.generator_of.get(&(flat, c)) {
            Some(&g) => self.presentation().generator_path(g),
            None => Path::identity(src),
        }
    }

    /// The object of `K X` at the vertex `coords` of the cell `c`.
    pub fn vertex(&self, x: &TruncatedMSSet, flat: usize, c: Cell, coords: &[usize]) -> ObjId {
        let m = x.multi(flat);
        let op = Operator(
            coords
                .iter()
                .zip(&m)
                .map(|(&v, &d)| Monotone { vals: vec![v], cod: d })
                .collect(),
        );
        x.act(&op, c) as ObjId
    }

    /// The path from vertex `s` to vertex `t` of the cell `c`, moving one axis
    /// at a time in axis order.
    pub fn path_between(&self, x: &TruncatedMSSet, flat: usize, c: Cell, s: &[usize], t: &[usize]) -> Path {
        let m = x.multi(flat);
        let mut here = s.to_vec();
        let mut path = Path::identity(self.vertex(x, flat, c, s));
        for axis in 0..m.len() {
            if s[axis] == t[axis] {
                continue;
            }
            let op = Operator(
                (0..m.len())
                    .map(|a| {
                        let vals = if a == axis { vec![s[a], t[a]] } else { vec![here[a]] };
                        Monotone { vals, cod: m[a] }
                    })
                    .collect(),
            );
            let edge = x.act(&op, c);
            let dims: Vec<usize> = (0..m.len()).map(|a| usize::from(a == axis)).collect();
            path = path.then(&self.edge_path(x, x.flat(&dims), edge));
            here[axis] = t[axis];
        }
        path
    }
}

/// Builds `K X`: one generator per nondegenerate 1-cell, one relation per
/// nondegenerate 2-cell.
pub fn k_adjoint(x: &TruncatedMSSet) -> Result<KAdjoint> {
    if x.bound() < 2 {
        return Err(Error::usage("K needs truncation at least 2"));
    }
    let n = x.n();
    let axes = n + 1;
    let zero = vec![0; axes];
    let base = x.flat(&zero);
    let objects = (0..x.count_at(base) as Cell).map(|c| x.cell_name(base, c).to_string()).collect();
    let mut p = Presentation::new(objects);
    let mut generator_cells = Vec::new();
    let mut generator_of = HashMap::new();
    let unit = |axis: usize| -> Vec<usize> { (0..axes).map(|a| usize::from(a == axis)).collect() };
    for axis in 0..axes {
        let flat = x.flat(&unit(axis));
        for c in 0..x.count_at(flat) as Cell {
            if x.is_degenerate(flat, c) {
                continue;
            }
            let src = x.face(flat, axis, 1, c) as ObjId;
            let tgt = x.face(flat, axis, 0, c) as ObjId;
            let tag = axis_tag(n, axis);
            let g = p.add_generator(format!("{}@{}", x.cell_name(flat, c), tag), src, tgt, Tags::of(&[tag]));
            generator_of.insert((flat, c), g);
            generator_cells.push((flat, c));
        }
    }
    let mut k = KAdjoint {
        nrel: PresentedNRel { n, presentation: p },
        generator_cells,
        generator_of,
    };
    let mut relations = Vec::new();
    for a in 0..axes {
        for b in a..axes {
            let mut m = zero.clone();
            m[a] += 1;
            m[b] += 1;
            let flat = x.flat(&m);
            for c in 0..x.count_at(flat) as Cell {
                if x.is_degenerate(flat, c) {
                    continue;
                }
                let edge = |axis: usize, i: usize| {
                    let face = x.face(flat, axis, i, c);
                    let mut below = m.clone();
                    below[axis] -= 1;
                    k.edge_path(x, x.flat(&below), face)
                };
                let (lhs, rhs) = if a == b {
                    (edge(a, 2).then(&edge(a, 0)), edge(a, 1))
                } else {
                    (edge(b, 1).then(&edge(a, 0)), edge(a, 1).then(&edge(b, 0)))
                };
                if lhs != rhs {
                    relations.push((lhs, rhs));
                }
            }
        }
    }
    for (l, r) in relations {
        k.nrel.presentation.add_relation(l, r);
    }
    Ok(k)
}

/// The generator map `K N C → C` sending each 1-cell to the arrow it names.
pub fn counit_map(c: &NRelCategory, nerve: &Nerve, k: &KAdjoint) -> GeneratorMap {
    let x = &nerve.msset;
    let base = x.flat(&vec![0; x.axes()]);
    let objects = nerve.cells[base].iter().map(|f| f.object_map[0]).collect();
    let generators = k
        .generator_cells
        .iter()
        .map(|&(flat, cell)| {
            let f = &nerve.cells[flat][cell as usize];
            // the one-arrow grid is chain(1): objects 0 and 1
            let grid = standard_nrel(c.n(), &x.multi(flat));
            f.arrow_map[grid.ambient().hom(0, 1)[0]]
        })
        .collect();
    GeneratorMap { objects, generators }
}

#[derive(Clone, Debug, Serialize)]
pub struct CounitReport {
    pub k_objects: usize,
    pub k_generators: usize,
    pub k_relations: usize,
    pub iso: IsoReport,
}

impl CounitReport {
    pub fn is_iso(&self) -> bool {
        self.iso.is_iso()
    }
}

/// Compares `K N C` with `C` along the counit.
pub fn counit(c: &NRelCategory, budget: Budget) -> Result<CounitReport> {
    let nv = nerve(c, 2, DEFAULT_MAX_NODES)?;
    let k = k_adjoint(&nv.msset)?;
    let map = counit_map(c, &nv, &k);
    let iso = compare_presented_to_explicit(k.presentation(), c.ambient(), &map, budget)?;
    Ok(CounitReport {
        k_objects: k.presentation().objects.len(),
        k_generators: k.presentation().generators.len(),
        k_relations: k.presentation().relations.len(),
        iso,
    })
}

fn realize_k(k: &KAdjoint, budget: Budget) -> Result<(NRelCategory, Realization)> {
    k.nrel.realize(budget).map_err(|u| Error::Resource {
        bound: "word_problem",
        detail: u.to_string(),
    })
}

/// The relative functor `standard_nrel(m) → K X` classified by a cell.
pub fn classifying_functor(x: &TruncatedMSSet, k: &KAdjoint, r: &Realization, flat: usize, c: Cell) -> Functor {
    let m = x.multi(flat);
    let grid = standard_nrel(x.n(), &m);
    classify_on(x, k, r, flat, c, &m, grid.ambient())
}

/// [`classifying_functor`] on a prebuilt grid: unit steps are read off `X`
/// and longer arrows composed in `K X`.
fn classify_on(
    x: &TruncatedMSSet,
    k: &KAdjoint,
    r: &Realization,
    flat: usize,
    c: Cell,
    m: &[usize],
    g: &ExplicitCategory,
) -> Functor {
    let object_map = g.objects().map(|o| k.vertex(x, flat, c, &grid_coords(m, o))).collect();
    let mut arrow_map = vec![usize::MAX; g.arrow_count()];
    let mut order: Vec<(usize, ArrowId)> = g
        .arrow_ids()
        .map(|a| {
            let (s, t) = (grid_coords(m, g.src(a)), grid_coords(m, g.tgt(a)));
            (t.iter().zip(&s).map(|(b, a)| b - a).sum(), a)
        })
        .collect();
    order.sort_unstable();
    for (len, a) in order {
        let (s, t) = (grid_coords(m, g.src(a)), grid_coords(m, g.tgt(a)));
        arrow_map[a] = if len <= 1 {
            r.interpret(&k.path_between(x, flat, c, &s, &t))
        } else {
            let axis = (0..m.len()).find(|&i| s[i] < t[i]).expect("nonidentity");
            let mut mid = s.clone();
            mid[axis] += 1;
            let (sm, mid_o) = (g.hom(g.src(a), grid_object(m, &mid))[0], grid_object(m, &mid));
            let rest = g.hom(mid_o, g.tgt(a))[0];
            r.category.compose(arrow_map[sm], arrow_map[rest])
        };
    }
    Functor { object_map, arrow_map }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitIndex {
    pub index: Vec<usize>,
    pub cells: usize,
    pub target_cells: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitReport {
    pub per_index: Vec<UnitIndex>,
    pub natural: bool,
    #[serde(skip)]
    pub map: MSSetMap,
}

impl UnitReport {
    pub fn is_iso(&self) -> bool {
        self.natural && self.per_index.iter().all(|i| i.injective && i.surjective)
    }

    pub fn is_injective(&self) -> bool {
        self.natural && self.per_index.iter().all(|i| i.injective)
    }
}

/// The unit `X → N K X` at the truncation of `X`.
pub fn unit(x: &TruncatedMSSet, budget: Budget) -> Result<UnitReport> {
    let k = k_adjoint(x)?;
    let (kx, r) = realize_k(&k, budget)?;
    let nkx = nerve(&kx, x.bound(), DEFAULT_MAX_NODES)?;
    let mut maps = Vec::with_capacity(x.index_count());
    let mut per_index = Vec::new();
    for flat in 0..x.index_count() {
        let mut images = Vec::with_capacity(x.count_at(flat));
        let m = x.multi(flat);
        let grid = standard_nrel(x.n(), &m);
        for c in 0..x.count_at(flat) as Cell {
            let f = classify_on(x, &k, &r, flat, c, &m, grid.ambient());
            let cell = nkx
                .cell_of(flat, &f)
                .ok_or_else(|| Error::Invalid(vec![format!("cell {} does not classify a relative functor", x.cell_name(flat, c))]))?;
            images.push(cell);
        }
        let mut distinct = images.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let target_cells = nkx.msset.count_at(flat);
        per_index.push(UnitIndex {
            index: x.multi(flat),
            cells: images.len(),
            target_cells,
            injective: distinct.len() == images.len(),
            surjective: distinct.len() == target_cells,
        });
        maps.push(images);
    }
    let map = MSSetMap { maps };
    let natural = map.is_natural(x, &nkx.msset);
    Ok(UnitReport { per_index, natural, map })
}

/// Whether `N C → N K N C → N C` is the identity on cells of degree `≤ bound`.
pub fn triangle_identity(c: &NRelCategory, bound: usize, budget: Budget) -> Result<bool> {
    let nc = nerve(c, bound.max(2), DEFAULT_MAX_NODES)?;
    let x = &nc.msset;
    let k = k_adjoint(x)?;
    let (_, r) = realize_k(&k, budget)?;
    let eps = counit_map(c, &nc, &k);
    let eps_arrow: Vec<ArrowId> = r.representatives.iter().map(|p| eps.evaluate(c.ambient(), p)).collect();
    for flat in 0..x.index_count() {
        if x.multi(flat).iter().any(|&d| d > bound) {
            continue;
        }
        for cell in 0..x.count_at(flat) as Cell {
            let f = classifying_functor(x, &k, &r, flat, cell);
            let back = Functor {
                object_map: f.object_map.iter().map(|&o| eps.objects[o]).collect(),
                arrow_map: f.arrow_map.iter().map(|&a| eps_arrow[a]).collect(),
            };
            if back != nc.cells[flat][cell as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransposeReport {
    pub functors: usize,
    pub maps: usize,
    pub bijective: bool,
}

/// Checks that transposition is a bijection between relative functors
/// `K X → C` and maps `X → N C`.
pub fn hom_transpose_check(x: &TruncatedMSSet, c: &NRelCategory, budget: Budget, max_nodes: u64) -> Result<TransposeReport> {
    let k = k_adjoint(x)?;
    let (kx, r) = realize_k(&k, budget)?;
    let nc = nerve(c, x.bound(), max_nodes)?;
    let mut functors = Vec::new();
    search_relative_functors(&kx, c, max_nodes, &mut |f| functors.push(f.clone()))?;
    let maps = crate::msset::enumerate_maps(x, &nc.msset, max_nodes)?;
    let classifying: Vec<Vec<Functor>> = (0..x.index_count())
        .map(|flat| (0..x.count_at(flat) as Cell).map(|cell| classifying_functor(x, &k, &r, flat, cell)).collect())
        .collect();
    let to_map = |f: &Functor| -> Option<MSSetMap> {
        let maps = classifying
            .iter()
            .enumerate()
            .map(|(flat, cs)| {
                cs.iter()
                    .map(|g| {
                        let composite = Functor {
                            object_map: g.object_map.iter().map(|&o| f.object_map[o]).collect(),
                            arrow_map: g.arrow_map.iter().map(|&a| f.arrow_map[a]).collect(),
                        };
                        nc.cell_of(flat, &composite)
                    })
                    .collect::<Option<Vec<Cell>>>()
            })
            .collect::<Option<Vec<Vec<Cell>>>>()?;
        Some(MSSetMap { maps })
    };
    let base = x.flat(&vec![0; x.axes()]);
    let to_functor = |phi: &MSSetMap| -> Functor {
        let gm = GeneratorMap {
            objects: phi.maps[base].iter().map(|&c| nc.cells[base][c as usize].object_map[0]).collect(),
            generators: k
                .generator_cells
                .iter()
                .map(|&(flat, cell)| {
                    let f = &nc.cells[flat][phi.maps[flat][cell as usize] as usize];
                    let grid = standard_nrel(c.n(), &x.multi(flat));
                    f.arrow_map[grid.ambient().hom(0, 1)[0]]
                })
                .collect(),
        };
        Functor {
            object_map: gm.objects.clone(),
            arrow_map: r.representatives.iter().map(|p| gm.evaluate(c.ambient(), p)).collect(),
        }
    };
    let mut bijective = functors.len() == maps.len();
    for f in &functors {
        match to_map(f) {
            Some(phi) => bijective &= maps.contains(&phi) && to_functor(&phi) == *f,
            None => bijective = false,
        }
    }
    for phi in &maps {
        let f = to_functor(phi);
        bijective &= functors.contains(&f) && to_map(&f).as_ref() == Some(phi);
    }
    Ok(TransposeReport {
        functors: functors.len(),
        maps: maps.len(),
        bijective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{counterexamples, nrel_corpus};
    use crate::msset::{is_two_coskeletal, skeleton, standard, terminal};
    use crate::relcat::{chain_v, chain_w};

    /// Relative functors from a grid into a poset, counted over object maps.
    fn oracle_count(c: &NRelCategory, m: &[usize]) -> usize {
        let amb = c.ambient();
        let n = c.n();
        let size: usize = m.iter().map(|d| d + 1).product();
        let objs = amb.object_count();
        let mut count = 0;
        for code in 0..objs.pow(size as u32) {
            let image: Vec<usize> = (0..size).map(|o| code / objs.pow(o as u32) % objs).collect();
            let ok = (0..size).all(|o| {
                let s = grid_coords(m, o);
                (0..m.len()).filter(|&a| s[a] < m[a]).all(|a| {
                    let mut t = s.clone();
                    t[a] += 1;
                    let hom = amb.hom(image[o], image[grid_object(m, &t)]);
                    !hom.is_empty() && c.in_tag(axis_tag(n, a), hom[0])
                })
            });
            count += usize::from(ok);
        }
        count
    }

    #[test]
    fn nerve_counts() {
        let v = nerve(&chain_v(1, 1, 1), 5, DEFAULT_MAX_NODES).unwrap();
        for p in 0..=5 {
            for q in 0..=5 {
                assert_eq!(v.msset.count(&[p, q]), p + 2);
            }
        }
        assert_eq!(v.msset.count(&[2, 5]), 4);
        let w = nerve(&chain_w(1, 1), 2, DEFAULT_MAX_NODES).unwrap();
        assert_eq!(w.msset.count(&[1, 1]), 6);
        let pt = nerve(&chain_w(0, 1), 2, DEFAULT_MAX_NODES).unwrap();
        assert_eq!(pt.msset.total_cells(), terminal(1, 2).total_cells());
    }

    #[test]
    fn nerve_matches_oracle_on_posets() {
        for entry in nrel_corpus() {
            let c = &entry.nrel;
            if !c.ambient().is_poset() || c.ambient().object_count() > 6 {
                continue;
            }
            let nv = nerve(c, 1, DEFAULT_MAX_NODES).unwrap();
            for flat in 0..nv.msset.index_count() {
                let m = nv.msset.multi(flat);
                assert_eq!(nv.msset.count_at(flat), oracle_count(c, &m), "{} at {m:?}", entry.name);
            }
        }
    }

    #[test]
    fn nerves_are_valid_and_coskeletal() {
        for entry in nrel_corpus().into_iter().filter(|e| e.nrel.n() == 1 && e.nrel.ambient().is_poset()) {
            let nv = nerve(&entry.nrel, 3, DEFAULT_MAX_NODES).unwrap();
            assert!(nv.msset.is_valid(), "{}", entry.name);
            assert!(is_two_coskeletal(&nv.msset), "{}", entry.name);
        }
    }

    #[test]
    fn k_of_standard() {
        let k = k_adjoint(&standard(&[1, 1], 2)).unwrap();
        let p = k.presentation();
        assert_eq!((p.objects.len(), p.generators.len(), p.relations.len()), (4, 4, 1));
        let (r, _) = k.nrel.realize(Budget::default()).unwrap();
        assert_eq!(r.ambient().object_count(), 4);
        assert_eq!(r.ambient().arrow_count(), 9);
        let pt = k_adjoint(&terminal(2, 2)).unwrap();
        assert_eq!((pt.presentation().objects.len(), pt.presentation().generators.len()), (1, 0));
        assert!(k_adjoint(&standard(&[1, 1], 1)).unwrap_err().to_string().contains("truncation"));
    }

    #[test]
    fn k_sees_only_the_two_skeleton() {
        let x = standard(&[1, 2], 3);
        let (sk, _) = skeleton(&x, 2);
        assert_eq!(k_adjoint(&sk).unwrap().presentation(), k_adjoint(&x).unwrap().presentation());
    }

    #[test]
    fn counits() {
        let r = counit(&chain_v(1, 1, 1), Budget::default()).unwrap();
        assert_eq!((r.k_objects, r.k_generators, r.k_relations), (2, 1, 0));
        assert!(r.is_iso());
        for p in 0..=2 {
            assert!(counit(&chain_w(p, 1), Budget::default()).unwrap().is_iso());
        }
        let ces = counterexamples();
        let square = counit(&ces[1].nrel, Budget::default()).unwrap();
        assert!(!square.is_iso());
        assert!(!square.iso.injective.eq(&crate::prescat::Verdict::Yes));
    }

    #[test]
    fn units() {
        let r = unit(&standard(&[0, 1], 2), Budget::default()).unwrap();
        let at = r.per_index.iter().find(|i| i.index == vec![1, 1]).unwrap();
        assert_eq!((at.cells, at.target_cells), (3, 6));
        assert!(at.injective && !at.surjective);
        assert!(r.is_injective() && !r.is_iso());
        for degrees in [[1, 0], [2, 0]] {
            assert!(unit(&standard(&degrees, 2), Budget::default()).unwrap().is_iso());
        }
        let nc = nerve(&chain_v(1, 1, 1), 2, DEFAULT_MAX_NODES).unwrap();
        assert!(unit(&nc.msset, Budget::default()).unwrap().is_iso());
    }

    #[test]
    fn triangle() {
        for entry in nrel_corpus().into_iter().take(5) {
            assert!(triangle_identity(&entry.nrel, 2, Budget::default()).unwrap(), "{}", entry.name);
        }
    }

    #[test]
    fn transposition() {
        let c = chain_v(1, 1, 1);
        let r = hom_transpose_check(&standard(&[1, 0], 2), &c, Budget::default(), DEFAULT_MAX_NODES).unwrap();
        assert_eq!((r.functors, r.maps), (3, 3));
        assert!(r.bijective);
        let small = nerve(&chain_w(1, 1), 2, DEFAULT_MAX_NODES).unwrap();
        let r = hom_transpose_check(&small.msset, &chain_v(1, 1, 1), Budget::default(), DEFAULT_MAX_NODES).unwrap();
        assert!(r.bijective);
        let r = hom_transpose_check(&standard(&[1, 1], 2), &chain_w(0, 1), Budget::default(), DEFAULT_MAX_NODES).unwrap();
        assert_eq!((r.functors, r.maps), (1, 1));
    }
}
