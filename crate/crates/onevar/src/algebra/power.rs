//! Functional powers: the algebra of maps `W -> A` with pointwise operations,
//! `box f` the constant map at the meet of `f` and `dia f` the constant map at
//! its join.

use super::{first_failure, AlgError, Algebra, MLattice, Table};

/// Table entries above this count are refused.
const MAX_ENTRIES: usize = 1 << 24;

/// The functional power `A^W` for `|W| = w`. Tuples are indexed by
/// `sum t[i] * n^(w-1-i)`.
pub fn functional_power(a: &Algebra, w: usize) -> Result<MLattice, AlgError> {
    if w == 0 {
        return Err(AlgError::Format("the index set must be non-empty".into()));
    }
    let n = a.size();
    let too_big = || AlgError::Cap(format!("{}^{w} is too large", a.name));
    let size = n.checked_pow(w as u32).ok_or_else(too_big)?;
    for op in a.signature().ops() {
        if size.checked_pow(op.arity as u32).is_none_or(|e| e > MAX_ENTRIES) {
            return Err(too_big());
        }
    }
    let tuples: Vec<Vec<usize>> = {
        let mut out = Vec::with_capacity(size);
        first_failure(n, w, |t| {
            out.push(t.to_vec());
            true
        });
        out
    };
    let index = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * n + x);
    let mut tables = Vec::new();
    let mut args = Vec::new();
    for (i, op) in a.signature().ops().iter().enumerate() {
        let mut data = Vec::with_capacity(size.pow(op.arity as u32));
        let mut out = vec![0; w];
        first_failure(size, op.arity, |fs| {
            for (c, slot) in out.iter_mut().enumerate() {
                args.clear();
                args.extend(fs.iter().map(|&f| tuples[f][c]));
                *slot = a.apply(i, &args);
            }
            data.push(index(&out));
            true
        });
        tables.push(Table::new(op.arity, data));
    }
    let labels = tuples.iter().map(|t| format!("({})", t.iter().map(|&x| a.label(x)).collect::<Vec<_>>().join(","))).collect();
    let base = Algebra::new(format!("{}^{w}", a.name), size, Some(labels), a.signature().clone(), tables)?;
    let constant = |x: usize| index(&vec![x; w]);
    let boxes = tuples.iter().map(|t| constant(a.meet_all(t.iter().copied()).expect("w > 0"))).collect();
    let dias = tuples.iter().map(|t| constant(a.join_all(t.iter().copied()).expect("w > 0"))).collect();
    MLattice::new(base, boxes, dias)
}
