//! The central extension `g_S ⊕ Omega_S/dS` with the Kassel cocycle
//! `P(x⊗a, y⊗b) = (x|y) reduce(a db)`, its descended form `L_û`, and the
//! windowed verification suites (cocycle laws, Jacobi, lifted actions,
//! decomposition, centre, perfectness, eigen-adapted pair lemma).
//!
//! Window computations use the eigen-adapted basis: a graded basis vector
//! of `L_u` is `E_k ⊗ s^alpha` with `E_k ∈ g_{alpha mod m}`, and a central
//! basis vector is a surviving coordinate of `(Omega_S/dS)_alpha`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kaehler::{graded_dim, pivot, reduce_pair, surviving_coords, CentralClass, ClassRecord};
use crate::laurent::{add_degrees, is_zero_degree, Degree, GaloisElement, Window};
use crate::liealg::SplitSimpleLieAlgebra;
use crate::linalg::{Matrix, SparseEchelon, SparseRow};
use crate::loopdescent::{loop_bracket, LoopElement, LoopRecord, Multiloop, WindowBasis};
use crate::report::CheckReport;
use crate::scalars::{CyclotomicField, CyclotomicScalar as Scalar};

/// `x ⊕ z ∈ g_S ⊕ Omega_S/dS`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedElement {
    pub loop_part: LoopElement,
    pub central: CentralClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ExtendedRecord {
    #[serde(rename = "loop")]
    pub loop_part: Vec<LoopRecord>,
    pub central: Vec<ClassRecord>,
}

impl ExtendedElement {
    pub fn new(loop_part: LoopElement, central: CentralClass) -> Result<Self> {
        if loop_part.ring() != central.ring() {
            return Err(Error::ShapeMismatch);
        }
        Ok(ExtendedElement { loop_part, central })
    }

    pub fn from_loop(x: LoopElement) -> Self {
        let central = CentralClass::zero(x.ring());
        ExtendedElement { loop_part: x, central }
    }

    pub fn from_central(dim: usize, z: CentralClass) -> Self {
        ExtendedElement {
            loop_part: LoopElement::zero(z.ring(), dim),
            central: z,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.loop_part.is_zero() && self.central.is_zero()
    }

    pub fn try_add(&self, other: &ExtendedElement) -> Result<Self> {
        Ok(ExtendedElement {
            loop_part: self.loop_part.try_add(&other.loop_part)?,
            central: self.central.try_add(&other.central)?,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ExtendedElement {
            loop_part: self.loop_part.scale(c),
            central: self.central.scale(c),
        }
    }

    pub fn to_record(&self) -> ExtendedRecord {
        ExtendedRecord {
            loop_part: self.loop_part.to_records(),
            central: self.central.to_records(),
        }
    }
}

/// `P(x⊗a, y⊗b) = (x|y) reduce(a db)`, extended bilinearly.
pub fn kassel_cocycle(g: &SplitSimpleLieAlgebra, x: &LoopElement, y: &LoopElement) -> Result<CentralClass> {
    if x.ring() != y.ring() || x.dim() != y.dim() {
        return Err(Error::ShapeMismatch);
    }
    let ring = x.ring();
    let mut out = CentralClass::zero(ring);
    for (a, u) in x.components() {
        for (b, v) in y.components() {
            let k = g.killing(u, v)?;
            if k.is_zero() || is_zero_degree(b) {
                continue;
            }
            let cls = reduce_pair(&ring.monomial(a, k), &ring.s_monomial(b));
            out.add_assign(&cls);
        }
    }
    Ok(out)
}

/// `[x⊕z, y⊕w] = [x,y] ⊕ P(x,y)`.
pub fn extended_bracket(g: &SplitSimpleLieAlgebra, x: &ExtendedElement, y: &ExtendedElement) -> Result<ExtendedElement> {
    Ok(ExtendedElement {
        loop_part: loop_bracket(g, &x.loop_part, &y.loop_part)?,
        central: kassel_cocycle(g, &x.loop_part, &y.loop_part)?,
    })
}

/// `X -> û_g(g.X) = (v_g(x) ⊗ g.a) ⊕ g.z`.
pub fn lifted_descent_action(ml: &Multiloop, g: &GaloisElement, x: &ExtendedElement) -> Result<ExtendedElement> {
    Ok(ExtendedElement {
        loop_part: ml.cocycle().act(g, &x.loop_part)?,
        central: x.central.galois_act(g)?,
    })
}

/// Fixed by every lifted descent action.
pub fn is_in_lifted(ml: &Multiloop, x: &ExtendedElement) -> Result<bool> {
    for g in ml.ring().galois_group() {
        if &lifted_descent_action(ml, &g, x)? != x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Loop part in `L_u` and central part in `Omega_R/dR`.
pub fn in_canonical_decomposition(ml: &Multiloop, x: &ExtendedElement) -> Result<bool> {
    Ok(ml.is_in_descended(&x.loop_part)? && x.central.in_base())
}

// ---------------------------------------------------------------------------
// Adapted-basis sparse vectors

/// Coordinate of a sparse vector of `g_S ⊕ Omega_S/dS` in adapted form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ExtKey {
    /// `E_k ⊗ s^alpha`.
    Loop(Degree, usize),
    /// Surviving coordinate `i` of `(Omega_S/dS)_alpha`.
    Central(Degree, usize),
}

impl ExtKey {
    pub fn degree(&self) -> &Degree {
        match self {
            ExtKey::Loop(a, _) | ExtKey::Central(a, _) => a,
        }
    }
}

pub type ExtVec = BTreeMap<ExtKey, Scalar>;

pub fn ext_add_scaled(acc: &mut ExtVec, c: &Scalar, v: &ExtVec) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        add_entry(acc, k.clone(), &(c * x));
    }
}

fn add_entry(acc: &mut ExtVec, key: ExtKey, x: &Scalar) {
    if x.is_zero() {
        return;
    }
    match acc.get_mut(&key) {
        Some(e) => {
            *e += x;
            if e.is_zero() {
                acc.remove(&key);
            }
        }
        None => {
            acc.insert(key, x.clone());
        }
    }
}

/// Canonical class of `coeff * s^alpha d(s^beta)` as central entries.
pub fn kassel_monomial(field: &CyclotomicField, alpha: &[i64], beta: &[i64], coeff: &Scalar) -> Vec<(ExtKey, Scalar)> {
    if coeff.is_zero() || is_zero_degree(beta) {
        return Vec::new();
    }
    let deg = add_degrees(alpha, beta);
    let mut v: Vec<Scalar> = beta.iter().map(|&b| coeff * &field.from_int(b)).collect();
    if let Some(p) = pivot(&deg) {
        let f = &v[p] / &field.from_int(deg[p]);
        if !f.is_zero() {
            for (x, &d) in v.iter_mut().zip(&deg) {
                if d != 0 {
                    *x -= &(&f * &field.from_int(d));
                }
            }
        }
    }
    v.into_iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (ExtKey::Central(deg.clone(), i), x))
        .collect()
}

/// Bracket and cocycle evaluation on adapted sparse vectors.
#[derive(Clone, Copy)]
pub struct ExtSpace<'a> {
    ml: &'a Multiloop,
}

impl<'a> ExtSpace<'a> {
    pub fn new(ml: &'a Multiloop) -> Self {
        ExtSpace { ml }
    }

    pub fn multiloop(&self) -> &'a Multiloop {
        self.ml
    }

    pub fn field(&self) -> &'a CyclotomicField {
        self.ml.field()
    }

    /// `[E_a ⊗ s^alpha, E_b ⊗ s^beta]` in `L_û`.
    pub fn basis_bracket(&self, alpha: &[i64], a: usize, beta: &[i64], b: usize) -> ExtVec {
        let ad = self.ml.adapted();
        let mut out = ExtVec::new();
        let deg = add_degrees(alpha, beta);
        for (k, c) in ad.bracket(a, b) {
            out.insert(ExtKey::Loop(deg.clone(), *k), c.clone());
        }
        for (key, x) in kassel_monomial(self.field(), alpha, beta, ad.killing(a, b)) {
            add_entry(&mut out, key, &x);
        }
        out
    }

    /// Kassel cocycle of two basis elements.
    pub fn basis_cocycle(&self, alpha: &[i64], a: usize, beta: &[i64], b: usize) -> ExtVec {
        kassel_monomial(self.field(), alpha, beta, self.ml.adapted().killing(a, b))
            .into_iter()
            .collect()
    }

    /// Bilinear bracket; central entries bracket to zero.
    pub fn bracket(&self, x: &ExtVec, y: &ExtVec) -> ExtVec {
        let mut out = ExtVec::new();
        for (kx, cx) in x {
            let ExtKey::Loop(alpha, a) = kx else { continue };
            for (ky, cy) in y {
                let ExtKey::Loop(beta, b) = ky else { continue };
                let br = self.basis_bracket(alpha, *a, beta, *b);
                ext_add_scaled(&mut out, &(cx * cy), &br);
            }
        }
        out
    }

    /// Kassel cocycle on sparse loop vectors.
    pub fn cocycle(&self, x: &ExtVec, y: &ExtVec) -> ExtVec {
        let mut out = ExtVec::new();
        for (kx, cx) in x {
            let ExtKey::Loop(alpha, a) = kx else { continue };
            for (ky, cy) in y {
                let ExtKey::Loop(beta, b) = ky else { continue };
                let k = self.ml.adapted().killing(*a, *b);
                if k.is_zero() {
                    continue;
                }
                for (key, v) in kassel_monomial(self.field(), alpha, beta, &(&(cx * cy) * k)) {
                    add_entry(&mut out, key, &v);
                }
            }
        }
        out
    }

    pub fn loop_basis(alpha: &[i64], k: usize) -> ExtVec {
        let mut v = ExtVec::new();
        v.insert(ExtKey::Loop(alpha.to_vec(), k), CyclotomicField::rationals().one());
        v
    }

    fn unit(&self, key: ExtKey) -> ExtVec {
        let mut v = ExtVec::new();
        v.insert(key, self.field().one());
        v
    }

    pub fn loop_unit(&self, alpha: &[i64], k: usize) -> ExtVec {
        self.unit(ExtKey::Loop(alpha.to_vec(), k))
    }

    pub fn central_unit(&self, alpha: &[i64], i: usize) -> ExtVec {
        self.unit(ExtKey::Central(alpha.to_vec(), i))
    }

    /// Converts to the Chevalley-coordinate representation.
    pub fn to_element(&self, v: &ExtVec) -> ExtendedElement {
        let ring = self.ml.ring();
        let mut x = LoopElement::zero(ring, self.ml.dim());
        let mut z = CentralClass::zero(ring);
        for (k, c) in v {
            match k {
                ExtKey::Loop(alpha, a) => {
                    let vec: Vec<Scalar> = self.ml.adapted().vector(*a).iter().map(|y| y * c).collect();
                    x.add_component(alpha, &vec);
                }
                ExtKey::Central(alpha, i) => {
                    let mut raw = vec![self.field().zero(); ring.nvars()];
                    raw[*i] = c.clone();
                    z.add_raw(alpha, &raw);
                }
            }
        }
        ExtendedElement { loop_part: x, central: z }
    }

    /// Converts from Chevalley coordinates; fails if the loop part is not
    /// in `L_u`.
    pub fn from_element(&self, x: &ExtendedElement) -> Result<ExtVec> {
        let mut out = ExtVec::new();
        for (alpha, v) in x.loop_part.components() {
            let coords = self
                .ml
                .adapted_coords(alpha, v)?
                .ok_or_else(|| Error::NotSubalgebra(format!("loop component of degree {alpha:?} is not in L_u")))?;
            for (k, c) in coords {
                out.insert(ExtKey::Loop(alpha.clone(), k), c);
            }
        }
        for (alpha, v) in x.central.components() {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    out.insert(ExtKey::Central(alpha.clone(), i), c.clone());
                }
            }
        }
        Ok(out)
    }
}

fn deg_str(a: &[i64]) -> String {
    format!("{a:?}")
}

fn key_str(ml: &Multiloop, k: &ExtKey) -> String {
    match k {
        ExtKey::Loop(a, i) => format!("E{i}⊗s^{} (class {:?})", deg_str(a), ml.adapted().class(*i)),
        ExtKey::Central(a, i) => format!("central[{}; ds{}]", deg_str(a), i + 1),
    }
}

// ---------------------------------------------------------------------------
// Suites

/// Antisymmetry and the 2-cocycle identity of the Kassel cocycle on all
/// window basis triples of `L_u`.
pub fn cocycle_check(ml: &Multiloop, window: &Window) -> CheckReport {
    let sp = ExtSpace::new(ml);
    let wb = ml.window_basis(*window);
    let el = wb.elements();
    let mut rep = CheckReport::new("cocycle", window.d);
    let mut pairs = 0usize;
    for (i, (a, x)) in el.iter().enumerate() {
        for (b, y) in &el[i..] {
            pairs += 1;
            let mut s = sp.basis_cocycle(a, *x, b, *y);
            ext_add_scaled(&mut s, &ml.field().one(), &sp.basis_cocycle(b, *y, a, *x));
            if !s.is_empty() {
                rep.violation(format!("antisymmetry fails at degrees {} {}", deg_str(a), deg_str(b)));
            }
        }
    }
    let mut triples = 0usize;
    let units: Vec<ExtVec> = el.iter().map(|(a, k)| sp.loop_unit(a, *k)).collect();
    for i in 0..el.len() {
        for j in i + 1..el.len() {
            let xy = sp.bracket(&units[i], &units[j]);
            for k in j + 1..el.len() {
                triples += 1;
                let yz = sp.bracket(&units[j], &units[k]);
                let zx = sp.bracket(&units[k], &units[i]);
                let mut s = sp.cocycle(&xy, &units[k]);
                ext_add_scaled(&mut s, &ml.field().one(), &sp.cocycle(&yz, &units[i]));
                ext_add_scaled(&mut s, &ml.field().one(), &sp.cocycle(&zx, &units[j]));
                if !s.is_empty() {
                    rep.violation(format!(
                        "cocycle identity fails at degrees {} {} {}",
                        deg_str(&el[i].0),
                        deg_str(&el[j].0),
                        deg_str(&el[k].0)
                    ));
                }
            }
        }
    }
    rep.set("basis_size", wb.len());
    rep.set("pairs", pairs);
    rep.set("triples", triples);
    rep.finish()
}

/// Jacobi identity of the extended bracket on window basis triples of
/// `L_û` (loop basis and central classes of `Omega_R/dR`).
pub fn extended_jacobi_check(ml: &Multiloop, window: &Window) -> CheckReport {
    let sp = ExtSpace::new(ml);
    let mut units: Vec<(String, ExtVec)> = ml
        .window_basis(*window)
        .elements()
        .iter()
        .map(|(a, k)| (deg_str(a), sp.loop_unit(a, *k)))
        .collect();
    for alpha in window.degrees() {
        if ml.ring().is_base_degree(&alpha) {
            for i in surviving_coords(&alpha) {
                units.push((format!("central {}", deg_str(&alpha)), sp.central_unit(&alpha, i)));
            }
        }
    }
    let mut rep = CheckReport::new("jacobi", window.d);
    let one = ml.field().one();
    let mut triples = 0usize;
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            let xy = sp.bracket(&units[i].1, &units[j].1);
            for k in j + 1..units.len() {
                triples += 1;
                let yz = sp.bracket(&units[j].1, &units[k].1);
                let zx = sp.bracket(&units[k].1, &units[i].1);
                let mut s = sp.bracket(&xy, &units[k].1);
                ext_add_scaled(&mut s, &one, &sp.bracket(&yz, &units[i].1));
                ext_add_scaled(&mut s, &one, &sp.bracket(&zx, &units[j].1));
                if !s.is_empty() {
                    rep.violation(format!(
                        "Jacobi fails at {} / {} / {}",
                        units[i].0, units[j].0, units[k].0
                    ));
                }
            }
        }
    }
    // centrality of Omega_R/dR
    for (label, u) in &units {
        if u.keys().all(|k| matches!(k, ExtKey::Central(..))) {
            for (_, w) in &units {
                if !sp.bracket(u, w).is_empty() {
                    rep.violation(format!("{label} is not central"));
                }
            }
        }
    }
    rep.set("basis_size", units.len());
    rep.set("triples", triples);
    rep.finish()
}

/// Lifted actions fix every window class of `Omega_R/dR` and preserve the
/// extended bracket on window basis pairs of `g_S`.
pub fn lift_check(ml: &Multiloop, window: &Window) -> Result<CheckReport> {
    let mut rep = CheckReport::new("lift", window.d);
    let ring = ml.ring();
    let g = ml.algebra();
    let group = ring.galois_group();
    let classes = crate::kaehler::invariant_classes(ring, window);
    let mut fixed = 0usize;
    for el in &group {
        for c in &classes {
            let x = ExtendedElement::from_central(ml.dim(), c.clone());
            if lifted_descent_action(ml, el, &x)? != x {
                rep.violation(format!("class {c} is moved by g = {:?}", el.0));
            } else {
                fixed += 1;
            }
        }
    }
    // bracket preservation on g_S basis pairs in a degree-1 window
    let small = Window::new(window.n, window.d.min(1));
    let mut basis = Vec::new();
    for alpha in small.degrees() {
        for i in 0..g.dim() {
            basis.push(ExtendedElement::from_loop(LoopElement::monomial(ring, &g.basis_vector(ml.field(), i), &alpha)));
        }
    }
    let mut pairs = 0usize;
    for el in &group {
        let images: Vec<ExtendedElement> = basis.iter().map(|x| lifted_descent_action(ml, el, x)).collect::<Result<_>>()?;
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                pairs += 1;
                let lhs = lifted_descent_action(ml, el, &extended_bracket(g, &basis[i], &basis[j])?)?;
                let rhs = extended_bracket(g, &images[i], &images[j])?;
                if lhs != rhs {
                    rep.violation(format!("g = {:?} does not preserve the bracket", el.0));
                }
            }
        }
    }
    rep.set("group_order", group.len());
    rep.set("classes_fixed", fixed);
    rep.set("classes", classes.len());
    rep.set("bracket_pairs", pairs);
    Ok(rep.finish())
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionDegree {
    pub degree: Vec<i64>,
    pub fixed_dim: usize,
    pub loop_dim: usize,
    pub central_dim: usize,
}

/// (a) `û_g(L_u) ⊆ L_u` on window bases; (b) per degree, the fixed space of
/// all lifted actions equals `(L_u)_alpha ⊕ (Omega_R/dR)_alpha`.
pub fn decomposition_check(ml: &Multiloop, window: &Window) -> Result<CheckReport> {
    let mut rep = CheckReport::new("decomposition", window.d);
    let ring = ml.ring();
    let field = ml.field();
    let dim = ml.dim();
    let group = ring.galois_group();
    let mut stable = 0usize;
    for alpha in window.degrees() {
        for x in ml.multiloop_component(&alpha) {
            for el in &group {
                let y = ml.cocycle().value(el)?;
                let image = x.apply_matrix(y)?;
                if !ml.is_in_descended(&image)? {
                    rep.violation(format!("u_g(L_u) not in L_u at degree {}", deg_str(&alpha)));
                } else {
                    stable += 1;
                }
            }
        }
    }
    let mut degrees = Vec::new();
    for alpha in window.degrees() {
        let coords = surviving_coords(&alpha);
        let k = coords.len();
        let n = dim + k;
        let basis_classes: Vec<CentralClass> = coords.iter().map(|&i| CentralClass::basis(ring, &alpha, i)).collect();
        let mut ech = SparseEchelon::new(field, n);
        for el in &group {
            let chi = ring.character(el, &alpha);
            let m = ml.cocycle().value(el)?.scale(&chi).sub(&Matrix::identity(field, dim));
            for r in 0..dim {
                ech.insert_dense(&[m.row(r).to_vec(), vec![field.zero(); k]].concat());
            }
            for (col, b) in basis_classes.iter().enumerate() {
                let moved = b.galois_act(el)?.try_add(&b.neg())?.component(&alpha);
                for (r, &i) in coords.iter().enumerate() {
                    if !moved[i].is_zero() {
                        let mut row = SparseRow::new();
                        row.insert(dim + r, moved[i].clone());
                        let _ = col;
                        ech.insert(row);
                    }
                }
            }
        }
        let fixed = ech.nullspace();
        let loop_dim = ml.eigen().component_dim(&ring.class(&alpha));
        let central_dim = if ring.is_base_degree(&alpha) { k } else { 0 };
        let mut fixed_ech = SparseEchelon::new(field, n);
        for v in &fixed {
            fixed_ech.insert_dense(v);
        }
        let mut ok = fixed.len() == loop_dim + central_dim;
        for x in ml.eigen().component(&ring.class(&alpha)) {
            ok &= fixed_ech.contains_dense(&[x.clone(), vec![field.zero(); k]].concat());
        }
        if central_dim > 0 {
            for r in 0..k {
                let mut v = vec![field.zero(); n];
                v[dim + r] = field.one();
                ok &= fixed_ech.contains_dense(&v);
            }
        }
        if !ok {
            rep.violation(format!(
                "fixed space at degree {} has dim {} (expected {} + {})",
                deg_str(&alpha),
                fixed.len(),
                loop_dim,
                central_dim
            ));
        }
        degrees.push(DecompositionDegree {
            degree: alpha,
            fixed_dim: fixed.len(),
            loop_dim,
            central_dim,
        });
    }
    rep.set("stable_images", stable);
    rep.set("degrees", degrees);
    Ok(rep.finish())
}

#[derive(Clone, Debug, Serialize)]
pub struct CentreDegree {
    pub degree: Vec<i64>,
    pub dim: usize,
    pub expected: usize,
}

#[derive(Clone, Debug)]
pub struct CentreResult {
    pub degrees: Vec<CentreDegree>,
    pub basis: Vec<ExtVec>,
    pub generator_window: i64,
    pub centre_dim: usize,
    pub expected: usize,
}

/// Kernel, degree by degree, of `Z -> ([Z, B])_B` over the `L_û` basis of
/// the generator window. The loop part of the kernel is retried with up to
/// three larger generator windows before being reported.
pub fn centre_window(ml: &Multiloop, window: &Window, generator_window: &Window) -> Result<CentreResult> {
    if generator_window.d < window.d {
        return Err(Error::DegenerateWindow("generator window must contain the window".into()));
    }
    let sp = ExtSpace::new(ml);
    let ring = ml.ring();
    let field = ml.field();
    let mut gen_d = generator_window.d;
    loop {
        let gw = ml.window_basis(Window::new(window.n, gen_d));
        let mut degrees = Vec::new();
        let mut basis = Vec::new();
        let mut too_big = false;
        for alpha in window.degrees() {
            let idx = ml.adapted().indices(&ring.class(&alpha)).to_vec();
            let r = idx.len();
            let mut ech = SparseEchelon::new(field, r.max(1));
            for (beta, b) in gw.elements() {
                let mut rows: BTreeMap<ExtKey, SparseRow> = BTreeMap::new();
                for (col, &k) in idx.iter().enumerate() {
                    for (key, c) in sp.basis_bracket(&alpha, k, beta, *b) {
                        rows.entry(key).or_default().insert(col, c);
                    }
                }
                for (_, row) in rows {
                    ech.insert(row);
                }
            }
            let kernel = if r == 0 { Vec::new() } else { ech.nullspace() };
            let central = if ring.is_base_degree(&alpha) { graded_dim(&alpha) } else { 0 };
            for v in &kernel {
                let mut e = ExtVec::new();
                for (col, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        e.insert(ExtKey::Loop(alpha.clone(), idx[col]), c.clone());
                    }
                }
                basis.push(e);
            }
            if central > 0 {
                for i in surviving_coords(&alpha) {
                    basis.push(sp.central_unit(&alpha, i));
                }
            }
            too_big |= !kernel.is_empty();
            degrees.push(CentreDegree {
                degree: alpha,
                dim: kernel.len() + central,
                expected: central,
            });
        }
        if too_big && gen_d < generator_window.d + 3 {
            gen_d += 1;
            continue;
        }
        let centre_dim = degrees.iter().map(|d| d.dim).sum();
        let expected = degrees.iter().map(|d| d.expected).sum();
        return Ok(CentreResult {
            degrees,
            basis,
            generator_window: gen_d,
            centre_dim,
            expected,
        });
    }
}

pub fn centre_check(ml: &Multiloop, window: &Window, margin: i64) -> Result<CheckReport> {
    let res = centre_window(ml, window, &window.enlarge(margin))?;
    let mut rep = CheckReport::new("centre", window.d);
    rep.set("centre_dim", res.centre_dim);
    rep.set("expected", res.expected);
    rep.set("generator_window", res.generator_window);
    rep.set("degrees", &res.degrees);
    for d in &res.degrees {
        if d.dim != d.expected {
            rep.violation(format!("centre has dim {} at degree {} (expected {})", d.dim, deg_str(&d.degree), d.expected));
        }
    }
    let sp = ExtSpace::new(ml);
    for b in res.basis.iter().take(16) {
        let el = sp.to_element(b);
        rep.witness(el.central.to_string());
    }
    Ok(rep.finish())
}

/// A bracket combination `target = sum c [X, Y]`.
#[derive(Clone, Debug, Serialize)]
pub struct PerfectWitness {
    pub target: String,
    pub terms: Vec<(String, String, String)>,
}

#[derive(Clone, Debug)]
pub struct PerfectnessResult {
    pub covered: usize,
    pub total: usize,
    pub uncovered: Vec<String>,
    pub witnesses: Vec<PerfectWitness>,
}

/// For every graded basis vector of `L_û` in the window, solves for an
/// exact combination of brackets of basis vectors from `window + margin`.
pub fn perfectness_witness(ml: &Multiloop, window: &Window, margin: i64) -> Result<PerfectnessResult> {
    let sp = ExtSpace::new(ml);
    let ring = ml.ring();
    let field = ml.field();
    let big = window.enlarge(margin);
    let gw = ml.window_basis(big);
    let mut result = PerfectnessResult {
        covered: 0,
        total: 0,
        uncovered: Vec::new(),
        witnesses: Vec::new(),
    };
    for alpha in window.degrees() {
        let mut targets: Vec<ExtKey> = ml
            .adapted()
            .indices(&ring.class(&alpha))
            .iter()
            .map(|&k| ExtKey::Loop(alpha.clone(), k))
            .collect();
        if ring.is_base_degree(&alpha) {
            targets.extend(surviving_coords(&alpha).into_iter().map(|i| ExtKey::Central(alpha.clone(), i)));
        }
        if targets.is_empty() {
            continue;
        }
        let row_of: BTreeMap<&ExtKey, usize> = targets.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut columns: Vec<Vec<Scalar>> = Vec::new();
        let mut labels: Vec<(usize, usize)> = Vec::new();
        let mut ech = SparseEchelon::new(field, targets.len());
        for (p, (beta, a)) in gw.elements().iter().enumerate() {
            let gamma: Degree = alpha.iter().zip(beta).map(|(x, y)| x - y).collect();
            if !big.contains(&gamma) {
                continue;
            }
            for &q in gw.at_degree(&gamma) {
                if q <= p {
                    continue;
                }
                let (_, b) = &gw.elements()[q];
                let br = sp.basis_bracket(beta, *a, &gamma, *b);
                let mut col = vec![field.zero(); targets.len()];
                for (k, c) in br {
                    col[row_of[&k]] = c;
                }
                // keep only columns that enlarge the span
                if ech.insert_dense(&col) {
                    columns.push(col);
                    labels.push((p, q));
                }
            }
        }
        let m = Matrix::from_columns(field, targets.len(), &columns);
        for (t, key) in targets.iter().enumerate() {
            result.total += 1;
            let mut rhs = vec![field.zero(); targets.len()];
            rhs[t] = field.one();
            match if columns.is_empty() { None } else { m.solve(&rhs) } {
                Some(sol) => {
                    result.covered += 1;
                    let terms = sol
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| {
                            let (p, q) = labels[i];
                            let (da, a) = &gw.elements()[p];
                            let (db, b) = &gw.elements()[q];
                            (c.to_string(), key_str(ml, &ExtKey::Loop(da.clone(), *a)), key_str(ml, &ExtKey::Loop(db.clone(), *b)))
                        })
                        .collect();
                    result.witnesses.push(PerfectWitness {
                        target: key_str(ml, key),
                        terms,
                    });
                }
                None => result.uncovered.push(key_str(ml, key)),
            }
        }
    }
    Ok(result)
}

pub fn perfectness_check(ml: &Multiloop, window: &Window, margin: i64) -> Result<CheckReport> {
    let res = perfectness_witness(ml, window, margin)?;
    let mut rep = CheckReport::new("perfect", window.d);
    rep.set("margin", margin);
    rep.set("covered", res.covered);
    rep.set("total", res.total);
    for u in &res.uncovered {
        rep.violation(format!("not a bracket combination: {u}"));
    }
    for w in res.witnesses.iter().take(8) {
        rep.witness(w);
    }
    Ok(rep.finish())
}

/// Eigen-adapted pair lemma: whenever `reduce(a_j d a_k)` is a nonzero class
/// of `Omega_R/dR` for window basis pairs `(x_i ⊗ a_j, x_l ⊗ a_k)` of `L_u`,
/// then `a_j a_k ∈ R` and `[x_i, x_l] ∈ g_0`; moreover every nonzero Kassel
/// value on such pairs lies in `Omega_R/dR`. Also verifies the `g_a`
/// properties on window monomials: `g_a = g_0` for `a ∈ R`,
/// `[g_a, g_b] ⊆ g_{ab}`, `[g_a, g_0] ⊆ g_a`, `g_a ⊆ g_{ra}` for `r ∈ R`.
pub fn sandr_check(ml: &Multiloop, window: &Window) -> Result<CheckReport> {
    let mut rep = CheckReport::new("sandr", window.d);
    let ring = ml.ring();
    let field = ml.field();
    let g = ml.algebra();
    let dim = g.dim();
    let sp = ExtSpace::new(ml);
    let g0 = ml.g0()?;
    let mut g0_ech = SparseEchelon::new(field, dim);
    for v in &g0 {
        g0_ech.insert_dense(v);
    }
    let wb = ml.window_basis(*window);
    let el = wb.elements();
    let mut hypothesis = 0usize;
    let mut nonzero_values = 0usize;
    for (alpha, i) in el {
        for (beta, l) in el {
            let class = reduce_pair(&ring.s_monomial(alpha), &ring.s_monomial(beta));
            if !class.is_zero() && class.in_base() {
                hypothesis += 1;
                let prod = &ring.s_monomial(alpha) * &ring.s_monomial(beta);
                if !prod.in_base_ring() {
                    rep.violation(format!("a_j a_k not in R for degrees {} {}", deg_str(alpha), deg_str(beta)));
                }
                let br = g.bracket(ml.adapted().vector(*i), ml.adapted().vector(*l))?;
                if !g0_ech.contains_dense(&br) {
                    rep.violation(format!("[x_i, x_l] not in g_0 for degrees {} {}", deg_str(alpha), deg_str(beta)));
                }
            }
            let value = sp.basis_cocycle(alpha, *i, beta, *l);
            if !value.is_empty() {
                nonzero_values += 1;
                if !value.keys().all(|k| ring.is_base_degree(k.degree())) {
                    rep.violation(format!("Kassel value outside Omega_R/dR at {} {}", deg_str(alpha), deg_str(beta)));
                }
            }
        }
    }
    rep.set("pairs", el.len() * el.len());
    rep.set("hypothesis_pairs", hypothesis);
    rep.set("nonzero_values", nonzero_values);

    // g_a properties on monomials of the window
    let degrees = window.degrees();
    let mut ga: BTreeMap<Degree, SparseEchelon> = BTreeMap::new();
    let mut ga_basis: BTreeMap<Degree, Vec<Vec<Scalar>>> = BTreeMap::new();
    for alpha in &degrees {
        let b = ml.g_a_subspace(&ring.s_monomial(alpha))?;
        let mut e = SparseEchelon::new(field, dim);
        for v in &b {
            e.insert_dense(v);
        }
        ga.insert(alpha.clone(), e);
        ga_basis.insert(alpha.clone(), b);
    }
    let lookup = |d: &Degree| -> Result<SparseEchelon> {
        if let Some(e) = ga.get(d) {
            return Ok(e.clone());
        }
        let mut e = SparseEchelon::new(field, dim);
        for v in ml.g_a_subspace(&ring.s_monomial(d))? {
            e.insert_dense(&v);
        }
        Ok(e)
    };
    let mut inclusions = 0usize;
    for alpha in &degrees {
        let ba = &ga_basis[alpha];
        if ring.is_base_degree(alpha) {
            let same = ba.len() == g0.len() && g0.iter().all(|v| ga[alpha].contains_dense(v));
            if !same {
                rep.violation(format!("g_a != g_0 for a = s^{}", deg_str(alpha)));
            }
        }
        for x in ba {
            for y in &g0 {
                inclusions += 1;
                if !ga[alpha].contains_dense(&g.bracket(x, y)?) {
                    rep.violation(format!("[g_a, g_0] not in g_a for a = s^{}", deg_str(alpha)));
                }
            }
        }
        for beta in &degrees {
            let target = lookup(&add_degrees(alpha, beta))?;
            for x in ba {
                for y in &ga_basis[beta] {
                    inclusions += 1;
                    if !target.contains_dense(&g.bracket(x, y)?) {
                        rep.violation(format!("[g_a, g_b] not in g_ab for s^{} s^{}", deg_str(alpha), deg_str(beta)));
                    }
                }
            }
        }
        // r a for r = 1 + t_1 + 2 t_n^{-1} in R
        let mut r = &ring.one() + &ring.t(0);
        let mut gamma = vec![0; ring.nvars()];
        gamma[ring.nvars() - 1] = -1;
        r = &r + &ring.t_monomial(&gamma).scale(&field.from_int(2));
        let ra = &r * &ring.s_monomial(alpha);
        let mut target = SparseEchelon::new(field, dim);
        for v in ml.g_a_subspace(&ra)? {
            target.insert_dense(&v);
        }
        for x in ba {
            inclusions += 1;
            if !target.contains_dense(x) {
                rep.violation(format!("g_a not in g_ra for a = s^{}", deg_str(alpha)));
            }
        }
    }
    rep.set("g_a_inclusions", inclusions);
    Ok(rep.finish())
}

/// Build integrity of `g` plus bracket closure and Jacobi of `L_u` in the
/// window and Jacobi of the extended bracket.
pub fn jacobi_check(ml: &Multiloop, window: &Window) -> Result<CheckReport> {
    let g = ml.algebra();
    let mut rep = extended_jacobi_check(ml, window);
    rep.check = "jacobi".into();
    rep.pass = true;
    if !g.verify_jacobi() {
        rep.violation("Jacobi fails on basis triples of g");
    }
    if !g.verify_killing_invariance() || !g.killing_nondegenerate() {
        rep.violation("Killing form is not invariant and nondegenerate");
    }
    // closure: brackets of window basis elements stay in L_u (slow path)
    let wb: WindowBasis = ml.window_basis(*window);
    let small: Vec<LoopElement> = wb
        .elements()
        .iter()
        .filter(|(a, _)| a.iter().all(|x| x.abs() <= 1))
        .map(|(a, k)| ml.basis_element(a, *k))
        .collect();
    let mut closure = 0usize;
    for x in &small {
        for y in &small {
            closure += 1;
            if !ml.is_in_descended(&loop_bracket(g, x, y)?)? {
                rep.violation("L_u is not bracket-closed");
            }
        }
    }
    rep.set("closure_pairs", closure);
    Ok(rep.finish())
}

/// Quotient identities of `Omega_S/dS` on seeded random Laurent
/// polynomials: `reduce(d f) = 0`, `reduce(a d1) = 0`,
/// `reduce(a db) = -reduce(b da)` and
/// `reduce(ab dc) + reduce(bc da) + reduce(ca db) = 0`.
pub fn zrel_check(ml: &Multiloop, window: &Window, seed: u64, samples: usize) -> Result<CheckReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let ring = ml.ring();
    let mut rep = CheckReport::new("zrel", window.d);
    let d = window.d.max(1);
    for t in 0..samples {
        let a = ring.random(&mut rng, 4, d);
        let b = ring.random(&mut rng, 4, d);
        let c = ring.random(&mut rng, 4, d);
        if !crate::kaehler::reduce(&crate::kaehler::differential(&a)).is_zero() {
            rep.violation(format!("sample {t}: reduce(d f) != 0 for f = {a}"));
        }
        if !reduce_pair(&a, &ring.one()).is_zero() {
            rep.violation(format!("sample {t}: reduce(a d1) != 0"));
        }
        if !reduce_pair(&a, &b).try_add(&reduce_pair(&b, &a))?.is_zero() {
            rep.violation(format!("sample {t}: reduce(a db) != -reduce(b da)"));
        }
        let s = reduce_pair(&a.try_mul(&b)?, &c)
            .try_add(&reduce_pair(&b.try_mul(&c)?, &a))?
            .try_add(&reduce_pair(&c.try_mul(&a)?, &b))?;
        if !s.is_zero() {
            rep.violation(format!("sample {t}: cyclic identity fails"));
        }
    }
    rep.set("seed", seed);
    rep.set("samples", samples);
    Ok(rep.finish())
}
