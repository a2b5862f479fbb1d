//! Subuniverses, relatively complete subalgebras and the correspondence
//! between them and modal expansions.
//!
//! A subset `S` is relatively complete when every element has a greatest
//! element of `S` below it and a least element of `S` above it. Such an `S`
//! determines `box a = max{b in S | b <= a}` and `dia a = min{b in S | a <= b}`,
//! and every modal expansion arises this way from its box image.

use super::{first_failure, AlgError, Algebra, MLattice};

/// A set of elements, sorted ascending.
pub type Subset = Vec<usize>;

/// Carriers above this size are not scanned for subuniverses.
const MAX_SCAN: usize = 20;

fn members(mask: u64, n: usize) -> Subset {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

fn closed(a: &Algebra, s: &[usize]) -> bool {
    let mut member = vec![false; a.size()];
    s.iter().for_each(|&x| member[x] = true);
    let mut args = Vec::new();
    a.signature().ops().iter().enumerate().all(|(i, op)| {
        first_failure(s.len(), op.arity, |t| {
            args.clear();
            args.extend(t.iter().map(|&j| s[j]));
            member[a.apply(i, &args)]
        })
        .is_none()
    })
}

/// All non-empty subsets closed under every operation, constants included,
/// ordered by the bitmask `sum 2^a`.
pub fn subuniverses(a: &Algebra) -> Result<Vec<Subset>, AlgError> {
    let n = a.size();
    if n > MAX_SCAN {
        return Err(AlgError::Cap(format!("subuniverse scan is limited to {MAX_SCAN} elements, `{}` has {n}", a.name)));
    }
    let mut out = Vec::new();
    for mask in 1u64..1 << n {
        let s = members(mask, n);
        if closed(a, &s) {
            out.push(s);
        }
    }
    Ok(out)
}

fn greatest_below(a: &Algebra, s: &[usize], x: usize) -> Option<usize> {
    let below: Vec<usize> = s.iter().copied().filter(|&b| a.le(b, x)).collect();
    below.iter().copied().find(|&m| below.iter().all(|&b| a.le(b, m)))
}

fn least_above(a: &Algebra, s: &[usize], x: usize) -> Option<usize> {
    let above: Vec<usize> = s.iter().copied().filter(|&b| a.le(x, b)).collect();
    above.iter().copied().find(|&m| above.iter().all(|&b| a.le(m, b)))
}

/// The element of `0..n` at which relative completeness of `s` fails.
fn incompleteness(a: &Algebra, s: &[usize]) -> Option<usize> {
    (0..a.size()).find(|&x| greatest_below(a, s, x).is_none() || least_above(a, s, x).is_none())
}

/// The relatively complete subuniverses in bitmask order.
pub fn relatively_complete_subalgebras(a: &Algebra) -> Result<Vec<Subset>, AlgError> {
    Ok(subuniverses(a)?.into_iter().filter(|s| incompleteness(a, s).is_none()).collect())
}

/// The modal expansion determined by a relatively complete subuniverse.
pub fn expand_from_subalgebra(a: &Algebra, s: &[usize]) -> Result<MLattice, AlgError> {
    let n = a.size();
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || sorted.iter().any(|&x| x >= n) {
        return Err(AlgError::NotRelComplete("the subset must be a non-empty set of elements".into()));
    }
    if !closed(a, &sorted) {
        return Err(AlgError::NotRelComplete(format!("{} is not closed under the operations", show(a, &sorted))));
    }
    if let Some(x) = incompleteness(a, &sorted) {
        return Err(AlgError::NotRelComplete(format!("{} has no greatest element below or least element above {}", show(a, &sorted), a.label(x))));
    }
    let boxes = (0..n).map(|x| greatest_below(a, &sorted, x).expect("checked")).collect();
    let dias = (0..n).map(|x| least_above(a, &sorted, x).expect("checked")).collect();
    let mut base = a.clone();
    base.name = format!("{}[{}]", a.name, sorted.iter().map(|&x| a.label(x)).collect::<Vec<_>>().join(","));
    MLattice::new(base, boxes, dias)
}

/// Every modal expansion of `a`, one per relatively complete subuniverse.
pub fn expansions(a: &Algebra) -> Result<Vec<MLattice>, AlgError> {
    relatively_complete_subalgebras(a)?.iter().map(|s| expand_from_subalgebra(a, s)).collect()
}

fn show(a: &Algebra, s: &[usize]) -> String {
    format!("{{{}}}", s.iter().map(|&x| a.label(x)).collect::<Vec<_>>().join(", "))
}

/// The image of `box`, checked to coincide with the image of `dia`, to be a
/// subuniverse, and to induce both modalities.
pub fn box_image(m: &MLattice) -> Result<Subset, AlgError> {
    let a = &m.base;
    let n = a.size();
    let mut image: Subset = (0..n).map(|x| m.boxed(x)).collect();
    image.sort_unstable();
    image.dedup();
    let mut dia: Subset = (0..n).map(|x| m.dia(x)).collect();
    dia.sort_unstable();
    dia.dedup();
    let fail = |condition: &str, w: Vec<usize>| AlgError::Violation { condition: condition.into(), witness: w.iter().map(|&x| a.label(x).to_string()).collect() };
    if image != dia {
        let x = image.iter().chain(&dia).copied().find(|x| !image.contains(x) || !dia.contains(x)).expect("sets differ");
        return Err(fail("box-image-equals-dia-image", vec![x]));
    }
    if !closed(a, &image) {
        return Err(fail("box-image-closed", image.clone()));
    }
    for x in 0..n {
        if greatest_below(a, &image, x) != Some(m.boxed(x)) {
            return Err(fail("box-is-greatest-below", vec![x]));
        }
        if least_above(a, &image, x) != Some(m.dia(x)) {
            return Err(fail("dia-is-least-above", vec![x]));
        }
    }
    Ok(image)
}
