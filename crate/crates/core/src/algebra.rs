//! Exact linear algebra over the rationals and over prime fields.
//!
//! Everything downstream (Betti numbers, cup products, nilpotency of ideals)
//! reduces to ranks, kernels and membership tests of dense matrices, so this
//! module fixes one normal form once and for all: reduced row echelon form
//! with pivots in increasing column order. All arithmetic is exact; rationals
//! use arbitrary-precision integers and GF(p) uses word-sized residues.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the word-sized backend limit 2^31")]
    ModulusTooLarge(u64),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// Coefficient field: the rationals or GF(p) for a prime p.
///
/// Construct prime fields through [`FieldSpec::prime`]; the variant payload is
/// trusted to be prime everywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(AlgebraError::ModulusTooLarge(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// 0 for the rationals, p for GF(p).
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Residue(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let m = n.rem_euclid(*p as i64) as u64;
                Scalar::Residue(m)
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue(r) => *r == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x + y)
            }
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue((x + y) % p)
            }
            _ => panic!("scalar does not match field {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (FieldSpec::Prime(p), Scalar::Residue(x)) => Scalar::Residue((p - x) % p),
            _ => panic!("scalar does not match field {self}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x * y)
            }
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue((x * y) % p)
            }
            _ => panic!("scalar does not match field {self}"),
        }
    }

    /// Multiplicative inverse. Panics on zero: exact algorithms only ever
    /// invert pivots that were just tested nonzero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Rational(x.recip())
            }
            (FieldSpec::Prime(p), Scalar::Residue(x)) => {
                assert!(*x != 0, "inverse of zero");
                Scalar::Residue(mod_inverse(*x, *p))
            }
            _ => panic!("scalar does not match field {self}"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// True when the scalar belongs to this field's representation.
    pub fn admits(&self, a: &Scalar) -> bool {
        matches!(
            (self, a),
            (FieldSpec::Rationals, Scalar::Rational(_)) | (FieldSpec::Prime(_), Scalar::Residue(_))
        )
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Extended Euclid on signed words; p < 2^31 keeps everything in range.
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inverse modulo non-prime");
    t0.rem_euclid(p as i64) as u64
}

/// Exact scalar: a rational or a residue in [0, p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

impl Scalar {
    /// Rough magnitude used for pivot selection: smaller is cheaper to
    /// eliminate with. Exactness is unaffected, only the pivot order.
    fn weight(&self) -> u64 {
        match self {
            Scalar::Rational(r) => (r.numer().bits() + r.denom().bits()) as u64,
            Scalar::Residue(_) => 1,
        }
    }

    /// Renders integers without a denominator, other rationals as n/d.
    pub fn render(&self) -> String {
        match self {
            Scalar::Rational(r) => r.to_string(),
            Scalar::Residue(x) => x.to_string(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue(x) => *x == 1,
        }
    }

    pub fn is_minus_one_in(&self, f: &FieldSpec) -> bool {
        match (self, f) {
            (Scalar::Rational(r), _) => (-r).is_one(),
            (Scalar::Residue(x), FieldSpec::Prime(p)) => *x == p - 1 && *p != 1,
            _ => false,
        }
    }
}

/// Dense row-major matrix over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Self {
        assert_eq!(rows * cols, entries.len(), "entry count must be rows*cols");
        Matrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize, f: FieldSpec) -> Self {
        Matrix::new(rows, cols, vec![f.zero(); rows * cols])
    }

    pub fn identity(n: usize, f: FieldSpec) -> Self {
        let mut m = Matrix::zero(n, n, f);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], f: FieldSpec) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&n| f.from_i64(n)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).clone());
            }
        }
        Matrix::new(self.cols, self.rows, out)
    }

    pub fn mul(&self, rhs: &Matrix, f: FieldSpec) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Matrix::zero(self.rows, rhs.cols, f);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar], f: FieldSpec) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !f.is_zero(a) && !f.is_zero(&v[j]) {
                        acc = f.add(&acc, &f.mul(a, &v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form. Pivot selection prefers entries with small
    /// representations (it keeps rational growth down on incidence matrices)
    /// but the result is the canonical RREF regardless.
    pub fn rref(&self, f: FieldSpec) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let mut best: Option<(usize, u64)> = None;
            for r in row..m.rows {
                let e = m.get(r, col);
                if !f.is_zero(e) {
                    let w = e.weight();
                    if best.map_or(true, |(_, bw)| w < bw) {
                        best = Some((r, w));
                    }
                }
            }
            let Some((pr, _)) = best else { continue };
            m.swap_rows(row, pr);
            let inv = f.inv(m.get(row, col));
            m.scale_row(row, &inv, f);
            for r in 0..m.rows {
                if r != row && !f.is_zero(m.get(r, col)) {
                    let factor = m.get(r, col).clone();
                    m.eliminate_row(r, row, &factor, f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, by: &Scalar, f: FieldSpec) {
        for j in 0..self.cols {
            let v = f.mul(self.get(r, j), by);
            self.set(r, j, v);
        }
    }

    /// row r -= factor * row src
    fn eliminate_row(&mut self, r: usize, src: usize, factor: &Scalar, f: FieldSpec) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if f.is_zero(s) {
                continue;
            }
            let v = f.sub(self.get(r, j), &f.mul(factor, s));
            self.set(r, j, v);
        }
    }

    pub fn rank(&self, f: FieldSpec) -> usize {
        self.rref(f).rank()
    }

    /// Basis of the right kernel. One vector per free column, in increasing
    /// column order; the free coordinate is 1 and all other free coordinates
    /// are 0, so the basis is in reduced (column) echelon form.
    pub fn kernel_basis(&self, f: FieldSpec) -> Vec<Vec<Scalar>> {
        let ech = self.rref(f);
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in ech.pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![f.zero(); self.cols];
            vec[free] = f.one();
            for (r, &c) in ech.pivots.iter().enumerate() {
                let e = ech.matrix.get(r, free);
                if !f.is_zero(e) {
                    vec[c] = f.neg(e);
                }
            }
            basis.push(vec);
        }
        basis
    }
}

/// Solves B x = z for the fixed matrix B, reusing one elimination.
///
/// Stores the row operations of the RREF of B as an explicit matrix E with
/// E B = R, so each solve is a single matrix-vector product plus a
/// consistency scan.
#[derive(Debug, Clone)]
pub struct Solver {
    field: FieldSpec,
    cols: usize,
    elim: Matrix,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(b: &Matrix, f: FieldSpec) -> Self {
        let n = b.rows();
        let mut aug = Matrix::zero(n, b.cols() + n, f);
        for i in 0..n {
            for j in 0..b.cols() {
                aug.set(i, j, b.get(i, j).clone());
            }
            aug.set(i, b.cols() + i, f.one());
        }
        // Restrict pivoting to the B block so the identity block only records
        // row operations.
        let mut m = aug;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..b.cols() {
            if row == n {
                break;
            }
            let mut best: Option<(usize, u64)> = None;
            for r in row..n {
                let e = m.get(r, col);
                if !f.is_zero(e) {
                    let w = e.weight();
                    if best.map_or(true, |(_, bw)| w < bw) {
                        best = Some((r, w));
                    }
                }
            }
            let Some((pr, _)) = best else { continue };
            m.swap_rows(row, pr);
            let inv = f.inv(m.get(row, col));
            m.scale_row(row, &inv, f);
            for r in 0..n {
                if r != row && !f.is_zero(m.get(r, col)) {
                    let factor = m.get(r, col).clone();
                    m.eliminate_row(r, row, &factor, f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let mut elim = Matrix::zero(n, n, f);
        for i in 0..n {
            for j in 0..n {
                elim.set(i, j, m.get(i, b.cols() + j).clone());
            }
        }
        Solver { field: f, cols: b.cols(), elim, pivots }
    }

    /// Returns coordinates x with B x = z, free coordinates set to zero,
    /// or None when the system is inconsistent.
    ///
    /// With E B = R in reduced echelon form, B x = z is solvable exactly when
    /// E z vanishes past the rank, and pinning free coordinates to zero makes
    /// the pivot coordinates read off E z directly.
    pub fn solve(&self, z: &[Scalar]) -> Option<Vec<Scalar>> {
        let f = self.field;
        let ez = self.elim.apply(z, f);
        let rank = self.pivots.len();
        for item in ez.iter().skip(rank) {
            if !f.is_zero(item) {
                return None;
            }
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &c) in self.pivots.iter().enumerate() {
            x[c] = ez[r].clone();
        }
        Some(x)
    }
}

/// Membership of v in the span of the given vectors. Returns coordinates in
/// the order of `basis` (free coordinates zero) or None.
pub fn in_span(v: &[Scalar], basis: &[Vec<Scalar>], f: FieldSpec) -> Option<Vec<Scalar>> {
    if basis.is_empty() {
        return if v.iter().all(|e| f.is_zero(e)) { Some(Vec::new()) } else { None };
    }
    let n = v.len();
    assert!(basis.iter().all(|b| b.len() == n), "basis vectors must match v");
    let mut cols = Matrix::zero(n, basis.len(), f);
    for (j, b) in basis.iter().enumerate() {
        for (i, e) in b.iter().enumerate() {
            cols.set(i, j, e.clone());
        }
    }
    Solver::new(&cols, f).solve(v)
}

/// Incrementally maintained row space in reduced echelon form.
#[derive(Debug, Clone)]
pub struct RowSpace {
    field: FieldSpec,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(dim: usize, f: FieldSpec) -> Self {
        RowSpace { field: f, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Reduces v against the current rows.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&v[p]) {
                let factor = v[p].clone();
                for j in 0..self.dim {
                    if !f.is_zero(&row[j]) {
                        v[j] = f.sub(&v[j], &f.mul(&factor, &row[j]));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let f = self.field;
        self.reduce(v).iter().all(|e| f.is_zero(e))
    }

    /// Inserts v, keeping the rows in reduced echelon form. Returns true when
    /// v added a new direction.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length must match the ambient dimension");
        let f = self.field;
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|e| !f.is_zero(e)) else {
            return false;
        };
        let inv = f.inv(&v[p]);
        for e in v.iter_mut() {
            *e = f.mul(e, &inv);
        }
        for (row, &rp) in self.rows.iter_mut().zip(&self.pivots) {
            debug_assert_ne!(rp, p);
            if !f.is_zero(&row[p]) {
                let factor = row[p].clone();
                for j in 0..self.dim {
                    if !f.is_zero(&v[j]) {
                        row[j] = f.sub(&row[j], &f.mul(&factor, &v[j]));
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }
}
