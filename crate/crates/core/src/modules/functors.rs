use std::collections::HashMap;

use crate::algebra::{AlgebraRef, Sparse};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};

use super::{Module, ModuleMap};

/// The indecomposable projective `P_v = A e_v`. Its basis is the algebra
/// basis elements `b` with `b e_v = b`, in index order.
pub fn projective<F: Field>(a: &AlgebraRef<F>, v: usize) -> Module<F> {
    projective_sum(a, &[v])
}

/// `P_{v_1} ⊕ ... ⊕ P_{v_k}` for the given list of vertices.
pub fn projective_sum<F: Field>(a: &AlgebraRef<F>, gens: &[usize]) -> Module<F> {
    let (vertex, pos) = projective_coords(a, gens);
    let index: HashMap<(usize, usize), usize> =
        pos.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let n = vertex.len();
    let mut actions = vec![Matrix::zeros(n, n); a.dim()];
    for (x, act) in actions.iter_mut().enumerate() {
        for (j, &(copy, b)) in pos.iter().enumerate() {
            for (k, c) in a.basis_product(x, b) {
                let i = index[&(copy, *k)];
                act.set(i, j, c.clone());
            }
        }
    }
    Module::from_adapted(a.clone(), vertex, actions).expect("projective modules are valid")
}

/// Coordinates of a sum of projectives: `(copy index, algebra basis index)`
/// per basis vector, together with its vertex tag.
pub fn projective_coords<F: Field>(a: &AlgebraRef<F>, gens: &[usize]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut vertex = Vec::new();
    let mut pos = Vec::new();
    for (copy, &v) in gens.iter().enumerate() {
        for b in 0..a.dim() {
            if a.right_vertex(b) == v {
                vertex.push(a.left_vertex(b));
                pos.push((copy, b));
            }
        }
    }
    (vertex, pos)
}

/// The regular module `A` (as `⊕_v P_v`).
pub fn regular<F: Field>(a: &AlgebraRef<F>) -> Module<F> {
    let all: Vec<usize> = (0..a.num_vertices()).collect();
    projective_sum(a, &all)
}

/// The simple module `S_v = P_v / rad P_v`.
pub fn simple<F: Field>(a: &AlgebraRef<F>, v: usize) -> Module<F> {
    let mut actions = vec![Matrix::zeros(1, 1); a.dim()];
    actions[a.idempotent(v)] = Matrix::identity(1);
    Module::from_adapted(a.clone(), vec![v], actions).expect("simple modules are valid")
}

pub fn direct_sum<F: Field>(m: &Module<F>, n: &Module<F>) -> Result<Module<F>> {
    m.check_same_algebra(n)?;
    let (dm, dn) = (m.dim(), n.dim());
    let d = dm + dn;
    let actions = (0..m.algebra().dim())
        .map(|b| {
            let mut x = Matrix::zeros(d, d);
            for i in 0..dm {
                for j in 0..dm {
                    x.set(i, j, m.action(b).get(i, j).clone());
                }
            }
            for i in 0..dn {
                for j in 0..dn {
                    x.set(dm + i, dm + j, n.action(b).get(i, j).clone());
                }
            }
            x
        })
        .collect();
    let mut vertex = m.vertices().to_vec();
    vertex.extend_from_slice(n.vertices());
    Module::from_adapted(m.algebra().clone(), vertex, actions)
}

/// Columns spanning `rad(A) M`, one vertex-homogeneous block after another.
pub fn radical_columns<F: Field>(m: &Module<F>) -> Matrix<F> {
    let cols: Vec<Vec<F>> = m
        .algebra()
        .generators()
        .iter()
        .flat_map(|&g| m.action(g).columns())
        .collect();
    homogeneous_basis(m, &cols).0
}

/// Vertex-homogeneous basis of the span of `cols`, which must itself be
/// spanned by homogeneous vectors (true for any submodule). Returns the basis
/// columns and their vertex tags, sorted by vertex.
pub fn homogeneous_basis<F: Field>(m: &Module<F>, cols: &[Vec<F>]) -> (Matrix<F>, Vec<usize>) {
    let n = m.dim();
    let mut basis = Vec::new();
    let mut tags = Vec::new();
    for v in 0..m.algebra().num_vertices() {
        let coords = m.coords_at(v);
        if coords.is_empty() {
            continue;
        }
        let projected: Vec<Vec<F>> = cols
            .iter()
            .map(|c| coords.iter().map(|&i| c[i].clone()).collect::<Vec<F>>())
            .filter(|c: &Vec<F>| c.iter().any(|x| !x.is_zero()))
            .collect();
        if projected.is_empty() {
            continue;
        }
        let block = Matrix::from_columns(coords.len(), &projected).unwrap().column_space();
        for c in block.columns() {
            let mut full = vec![F::zero(); n];
            for (k, &i) in coords.iter().enumerate() {
                full[i] = c[k].clone();
            }
            basis.push(full);
            tags.push(v);
        }
    }
    (Matrix::from_columns(n, &basis).unwrap(), tags)
}

/// Multiplicity of each simple in the top `M / rad M`.
pub fn top<F: Field>(m: &Module<F>) -> Vec<usize> {
    let (_, tags) = homogeneous_basis(m, &radical_columns(m).columns());
    let mut t = m.dim_vector();
    for v in tags {
        t[v] -= 1;
    }
    t
}

/// The submodule spanned by the columns of `span` (an `A`-stable subspace),
/// with its inclusion map.
pub fn submodule<F: Field>(m: &Module<F>, span: &Matrix<F>) -> Result<(Module<F>, ModuleMap<F>)> {
    let (s, tags) = homogeneous_basis(m, &span.columns());
    let k = s.cols();
    let alg = m.algebra();
    if k == 0 {
        let z = Module::zero(alg.clone());
        let incl = Matrix::zeros(m.dim(), 0);
        return Ok((
            z.clone(),
            ModuleMap {
                source: z,
                target: m.clone(),
                matrix: incl,
            },
        ));
    }
    // rows of s forming an invertible k x k block
    let rows = s.transpose().independent_columns();
    let sr = s.select_rows(&rows);
    let sr_inv = sr
        .solve_matrix(&Matrix::identity(k))?
        .expect("selected rows are independent");
    let mut actions = Vec::with_capacity(alg.dim());
    for b in 0..alg.dim() {
        let image = m.action(b).select_rows(&rows).mul(&s);
        let x = sr_inv.mul(&image);
        actions.push(x);
    }
    for &g in alg.generators() {
        if s.mul(&actions[g]) != m.action(g).mul(&s) {
            return Err(Error::InvalidModule(format!(
                "span is not stable under {}",
                alg.labels()[g]
            )));
        }
    }
    let sub = Module::from_adapted(alg.clone(), tags, actions)?;
    let incl = ModuleMap {
        source: sub.clone(),
        target: m.clone(),
        matrix: s,
    };
    Ok((sub, incl))
}

/// Quotient by the image of an injective homomorphism. Returns the quotient
/// and the projection map.
pub fn quotient_module<F: Field>(m: &Module<F>, incl: &ModuleMap<F>) -> Result<(Module<F>, ModuleMap<F>)> {
    if !incl.is_injective() {
        return Err(Error::Precondition("inclusion map is not injective".into()));
    }
    quotient_by_span(m, &incl.matrix)
}

/// Quotient by the submodule spanned by the columns of `span`.
pub fn quotient_by_span<F: Field>(m: &Module<F>, span: &Matrix<F>) -> Result<(Module<F>, ModuleMap<F>)> {
    let (s, _) = homogeneous_basis(m, &span.columns());
    let n = m.dim();
    let k = s.cols();
    let piv = s.hstack(&Matrix::identity(n)).independent_columns();
    let comp: Vec<usize> = piv.iter().filter(|&&p| p >= k).map(|&p| p - k).collect();
    let t = s.hstack(&Matrix::identity(n).select_cols(&comp));
    let tinv = t
        .solve_matrix(&Matrix::identity(n))?
        .expect("submodule plus complement is a basis");
    let proj_rows: Vec<usize> = (k..n).collect();
    let proj = tinv.select_rows(&proj_rows);
    let alg = m.algebra();
    let actions = (0..alg.dim())
        .map(|b| proj.mul(&m.action(b).select_cols(&comp)))
        .collect();
    let vertex = comp.iter().map(|&i| m.vertices()[i]).collect();
    let q = Module::from_adapted(alg.clone(), vertex, actions)?;
    let map = ModuleMap {
        source: m.clone(),
        target: q.clone(),
        matrix: proj,
    };
    Ok((q, map))
}

/// A projective cover `P -> M`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover<F> {
    /// Vertex of each indecomposable summand of `P`, sorted.
    pub generators: Vec<usize>,
    pub projective: Module<F>,
    pub epi: ModuleMap<F>,
}

pub fn projective_cover<F: Field>(m: &Module<F>) -> ProjectiveCover<F> {
    let alg = m.algebra();
    let rad = radical_columns(m);
    let n = m.dim();
    let piv = rad.hstack(&Matrix::identity(n)).independent_columns();
    let mut gen_coords: Vec<usize> = piv
        .iter()
        .filter(|&&p| p >= rad.cols())
        .map(|&p| p - rad.cols())
        .collect();
    gen_coords.sort_by_key(|&i| (m.vertices()[i], i));
    let generators: Vec<usize> = gen_coords.iter().map(|&i| m.vertices()[i]).collect();
    let p = projective_sum(alg, &generators);
    let (_, pos) = projective_coords(alg, &generators);
    let mut epi = Matrix::zeros(n, p.dim());
    for (j, &(copy, b)) in pos.iter().enumerate() {
        let src = gen_coords[copy];
        for i in 0..n {
            let x = m.action(b).get(i, src);
            if !x.is_zero() {
                epi.set(i, j, x.clone());
            }
        }
    }
    debug_assert!(Module::intertwines(&p, m, &epi));
    ProjectiveCover {
        generators,
        projective: p.clone(),
        epi: ModuleMap {
            source: p,
            target: m.clone(),
            matrix: epi,
        },
    }
}

/// Kernel of a homomorphism, as columns in source coordinates, computed
/// vertex by vertex.
pub fn kernel_columns<F: Field>(map: &ModuleMap<F>) -> Matrix<F> {
    let src = &map.source;
    let tgt = &map.target;
    let mut cols = Vec::new();
    for v in 0..src.algebra().num_vertices() {
        let sc = src.coords_at(v);
        if sc.is_empty() {
            continue;
        }
        let tc = tgt.coords_at(v);
        let block = map.matrix.select_rows(&tc).select_cols(&sc);
        for k in block.kernel_basis().columns() {
            let mut full = vec![F::zero(); src.dim()];
            for (kk, &i) in sc.iter().enumerate() {
                full[i] = k[kk].clone();
            }
            cols.push(full);
        }
    }
    Matrix::from_columns(src.dim(), &cols).unwrap()
}

/// First syzygy together with its inclusion into the projective cover.
pub fn syzygy_with_cover<F: Field>(m: &Module<F>) -> (ProjectiveCover<F>, Module<F>, ModuleMap<F>) {
    let cover = projective_cover(m);
    let k = kernel_columns(&cover.epi);
    let (omega, incl) = submodule(&cover.projective, &k).expect("kernels are submodules");
    (cover, omega, incl)
}

pub fn syzygy<F: Field>(m: &Module<F>) -> Module<F> {
    syzygy_with_cover(m).1
}

/// `Ω^n(M)`.
pub fn syzygy_n<F: Field>(m: &Module<F>, n: usize) -> Module<F> {
    let mut cur = m.clone();
    for _ in 0..n {
        if cur.is_zero() {
            break;
        }
        cur = syzygy(&cur);
    }
    cur
}

pub fn is_projective<F: Field>(m: &Module<F>) -> bool {
    let t = top(m);
    let alg = m.algebra();
    let cover_dim: usize = t
        .iter()
        .enumerate()
        .map(|(v, &k)| k * (0..alg.dim()).filter(|&b| alg.right_vertex(b) == v).count())
        .sum();
    cover_dim == m.dim()
}

/// Projective with top supported on `subset`, i.e. a member of `add(Ae)`
/// for `e = Σ_{v ∈ subset} e_v`.
pub fn in_add<F: Field>(m: &Module<F>, subset: &[usize]) -> bool {
    is_projective(m)
        && top(m)
            .iter()
            .enumerate()
            .all(|(v, &k)| k == 0 || subset.contains(&v))
}

/// Basis of `Hom_A(M, N)`, each element a `N.dim() x M.dim()` matrix.
pub fn hom_basis<F: Field>(m: &Module<F>, n: &Module<F>) -> Result<Vec<Matrix<F>>> {
    m.check_same_algebra(n)?;
    let alg = m.algebra();
    // unknowns: entries (i, j) with vertex(n_i) == vertex(m_j)
    let mut unknown = Vec::new();
    let mut index = vec![usize::MAX; n.dim() * m.dim()];
    for i in 0..n.dim() {
        for j in 0..m.dim() {
            if n.vertices()[i] == m.vertices()[j] {
                index[i * m.dim() + j] = unknown.len();
                unknown.push((i, j));
            }
        }
    }
    let mut rows: Vec<Vec<F>> = Vec::new();
    for &g in alg.generators() {
        let (t, s) = (alg.left_vertex(g), alg.right_vertex(g));
        let an = n.action(g);
        let am = m.action(g);
        for &i in &n.coords_at(t) {
            for &j in &m.coords_at(s) {
                // (an f - f am)[i, j] = 0
                let mut row = vec![F::zero(); unknown.len()];
                for k in n.coords_at(s) {
                    let c = an.get(i, k);
                    if !c.is_zero() {
                        let u = index[k * m.dim() + j];
                        row[u] = row[u].clone() + c.clone();
                    }
                }
                for k in m.coords_at(t) {
                    let c = am.get(k, j);
                    if !c.is_zero() {
                        let u = index[i * m.dim() + k];
                        row[u] = row[u].clone() - c.clone();
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() {
        Matrix::zeros(0, unknown.len())
    } else {
        Matrix::from_rows(rows)?
    };
    let ker = system.kernel_basis();
    Ok(ker
        .columns()
        .into_iter()
        .map(|c| {
            let mut f = Matrix::zeros(n.dim(), m.dim());
            for (u, &(i, j)) in unknown.iter().enumerate() {
                f.set(i, j, c[u].clone());
            }
            f
        })
        .collect())
}

pub fn hom_dim<F: Field>(m: &Module<F>, n: &Module<F>) -> Result<usize> {
    Ok(hom_basis(m, n)?.len())
}

/// `dim (X ⊗_A Y)` for a right module `X` (left over `A^op`) and a left
/// module `Y`.
pub fn tensor_dim<F: Field>(x: &Module<F>, y: &Module<F>) -> Result<usize> {
    let alg = y.algebra();
    if !crate::algebra::same_algebra(x.algebra(), &alg.opposite_ref()) {
        return Err(Error::AlgebraMismatch(
            "first tensor factor must be a module over the opposite algebra".into(),
        ));
    }
    // space: ⊕_v X_v ⊗ Y_v
    let nv = alg.num_vertices();
    let xc: Vec<Vec<usize>> = (0..nv).map(|v| x.coords_at(v)).collect();
    let yc: Vec<Vec<usize>> = (0..nv).map(|v| y.coords_at(v)).collect();
    let mut offset = vec![0; nv + 1];
    for v in 0..nv {
        offset[v + 1] = offset[v] + xc[v].len() * yc[v].len();
    }
    let total = offset[nv];
    let pos = |v: usize, i: usize, j: usize| offset[v] + i * yc[v].len() + j;
    let mut rels: Vec<Vec<F>> = Vec::new();
    for &g in alg.generators() {
        // g: e_t g e_s, x in X e_t, y in e_s Y
        let (t, s) = (alg.left_vertex(g), alg.right_vertex(g));
        let ax = x.action(g);
        let ay = y.action(g);
        for (ii, &xi) in xc[t].iter().enumerate() {
            for (jj, &yj) in yc[s].iter().enumerate() {
                let mut r = vec![F::zero(); total];
                // (x g) ⊗ y
                for (kk, &xk) in xc[s].iter().enumerate() {
                    let c = ax.get(xk, xi);
                    if !c.is_zero() {
                        let p = pos(s, kk, jj);
                        r[p] = r[p].clone() + c.clone();
                    }
                }
                // - x ⊗ (g y)
                for (kk, &yk) in yc[t].iter().enumerate() {
                    let c = ay.get(yk, yj);
                    if !c.is_zero() {
                        let p = pos(t, ii, kk);
                        r[p] = r[p].clone() - c.clone();
                    }
                }
                if r.iter().any(|c| !c.is_zero()) {
                    rels.push(r);
                }
            }
        }
    }
    let rank = if rels.is_empty() {
        0
    } else {
        Matrix::from_columns(total, &rels)?.rank()
    };
    Ok(total - rank)
}

/// `D(M) = Hom_k(M, k)` as a module over the opposite algebra.
pub fn dual<F: Field>(m: &Module<F>) -> Module<F> {
    let op = m.algebra().opposite_ref();
    let actions = m.actions().iter().map(Matrix::transpose).collect();
    Module::from_adapted(op, m.vertices().to_vec(), actions).expect("duals are valid")
}

/// Restriction of scalars to a corner algebra `B = eAe` whose basis element
/// `k` is the algebra basis element `embedding[k]` and whose vertex `i` is
/// the vertex `corner_vertices[i]` of the ambient algebra.
pub fn restrict_to_corner<F: Field>(
    m: &Module<F>,
    corner: &AlgebraRef<F>,
    embedding: &[usize],
    corner_vertices: &[usize],
) -> Result<Module<F>> {
    let coords: Vec<usize> = (0..m.dim())
        .filter(|&i| corner_vertices.contains(&m.vertices()[i]))
        .collect();
    let vertex = coords
        .iter()
        .map(|&i| {
            corner_vertices
                .iter()
                .position(|&v| v == m.vertices()[i])
                .unwrap()
        })
        .collect();
    let actions = embedding
        .iter()
        .map(|&b| m.action(b).select_rows(&coords).select_cols(&coords))
        .collect();
    Module::from_adapted(corner.clone(), vertex, actions)
}

/// The trace `A e M`: the submodule generated by `e M`, where `e` is the sum
/// of the idempotents at `subset`.
pub fn trace_submodule<F: Field>(m: &Module<F>, subset: &[usize]) -> Result<(Module<F>, ModuleMap<F>)> {
    let alg = m.algebra();
    let gens: Vec<usize> = (0..m.dim())
        .filter(|&i| subset.contains(&m.vertices()[i]))
        .collect();
    let mut cols = Vec::new();
    for b in 0..alg.dim() {
        for &i in &gens {
            if alg.right_vertex(b) == m.vertices()[i] {
                let c = m.action(b).column(i);
                if c.iter().any(|x| !x.is_zero()) {
                    cols.push(c);
                }
            }
        }
    }
    let span = Matrix::from_columns(m.dim(), &cols)?;
    submodule(m, &span)
}

/// Change of rings along an algebra map. `images[k]` is the image in the
/// algebra of `m` of basis element `k` of `target`; `vertex_map[v]` is the
/// vertex of `target` that each vertex `v` of `m`'s algebra goes to.
pub fn change_rings<F: Field>(
    m: &Module<F>,
    target: &AlgebraRef<F>,
    images: &[Sparse<F>],
    vertex_map: &[Option<usize>],
) -> Result<Module<F>> {
    let mut vertex = Vec::with_capacity(m.dim());
    for &v in m.vertices() {
        match vertex_map[v] {
            Some(w) => vertex.push(w),
            None => {
                return Err(Error::Precondition(
                    "module is supported at a vertex that the ring change kills".into(),
                ))
            }
        }
    }
    let actions = images.iter().map(|x| m.act_sparse(x)).collect();
    Module::from_adapted(target.clone(), vertex, actions)
}

/// Composition factors of the radical layers `rad^k M / rad^{k+1} M`, top first.
pub fn loewy_layers<F: Field>(m: &Module<F>) -> Vec<Vec<usize>> {
    let mut layers = Vec::new();
    let mut cur = Matrix::identity(m.dim());
    let mut cur_dims = m.dim_vector();
    while cur.cols() > 0 {
        let cols: Vec<Vec<F>> = m
            .algebra()
            .generators()
            .iter()
            .flat_map(|&g| m.action(g).mul(&cur).columns())
            .collect();
        let (next, tags) = homogeneous_basis(m, &cols);
        let mut next_dims = vec![0; m.algebra().num_vertices()];
        for v in tags {
            next_dims[v] += 1;
        }
        layers.push(cur_dims.iter().zip(&next_dims).map(|(a, b)| a - b).collect());
        cur = next;
        cur_dims = next_dims;
    }
    layers
}

/// Composition factors of the socle layers `soc^k M / soc^{k-1} M`, listed
/// from the top of the module down to the socle.
pub fn socle_layers<F: Field>(m: &Module<F>) -> Vec<Vec<usize>> {
    let alg = m.algebra();
    let nv = alg.num_vertices();
    let mut layers = Vec::new();
    let mut soc_dims = vec![0; nv];
    let mut soc = Matrix::zeros(m.dim(), 0);
    while soc.cols() < m.dim() {
        // soc^{k+1} = { x : g x ∈ soc^k for all generators g }
        let (_, proj) = quotient_by_span(m, &soc).expect("socle is a submodule");
        let stacked = alg
            .generators()
            .iter()
            .map(|&g| proj.matrix.mul(m.action(g)))
            .fold(Matrix::zeros(0, m.dim()), |acc, x| acc.vstack(&x));
        let mut cols = Vec::new();
        let mut dims = vec![0; nv];
        for v in 0..nv {
            let coords = m.coords_at(v);
            let ker = stacked.select_cols(&coords).kernel_basis();
            dims[v] = ker.cols();
            for c in ker.columns() {
                let mut full = vec![F::zero(); m.dim()];
                for (k, &i) in coords.iter().enumerate() {
                    full[i] = c[k].clone();
                }
                cols.push(full);
            }
        }
        layers.push(dims.iter().zip(&soc_dims).map(|(a, b)| a - b).collect());
        soc_dims = dims;
        soc = Matrix::from_columns(m.dim(), &cols).unwrap();
    }
    layers.reverse();
    layers
}

/// Whether `e_v` for `v` in `subset` all act as zero.
pub fn annihilated_by<F: Field>(m: &Module<F>, subset: &[usize]) -> bool {
    m.vertices().iter().all(|v| !subset.contains(v))
}

/// Trace of the action of each basis element; a cheap module invariant.
pub fn action_traces<F: Field>(m: &Module<F>) -> Vec<F> {
    m.actions()
        .iter()
        .map(|a| (0..a.rows()).fold(F::zero(), |acc, i| acc + a.get(i, i).clone()))
        .collect()
}
