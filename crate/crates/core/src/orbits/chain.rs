//! Deterministic Schreier-Sims, used only to cross-check generator sets.

use std::collections::HashSet;

use num_bigint::BigUint;

use super::{GenAction, Perm};
use crate::error::{Error, Result};

const MAX_DEGREE: usize = 400;

struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// `reps[x]` maps `base` to `x`.
    reps: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(n: usize, base: usize) -> Level {
        let mut reps = vec![None; n];
        reps[base] = Some(identity(n));
        Level {
            base,
            gens: Vec::new(),
            reps,
            orbit: vec![base],
        }
    }

    /// Extends the orbit after a generator was added; existing representatives stay.
    fn grow_orbit(&mut self) {
        let mut k = 0;
        while k < self.orbit.len() {
            let y = self.orbit[k];
            k += 1;
            for g in &self.gens {
                let z = g[y] as usize;
                if self.reps[z].is_none() {
                    let ty = self.reps[y].as_ref().unwrap();
                    self.reps[z] = Some(compose(g, ty));
                    self.orbit.push(z);
                }
            }
        }
    }
}

fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

/// `a` after `b`.
fn compose(a: &[u32], b: &[u32]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn inverse(a: &[u32]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y as usize] = x as u32;
    }
    inv
}

fn is_identity(a: &[u32]) -> bool {
    a.iter().enumerate().all(|(x, &y)| y as usize == x)
}

/// Sifts `g` through levels `from..`; returns the residue and the level where it stuck.
fn sift(levels: &[Level], from: usize, mut g: Perm) -> (Perm, usize) {
    for (i, level) in levels.iter().enumerate().skip(from) {
        let x = g[level.base] as usize;
        match &level.reps[x] {
            Some(u) => g = compose(&inverse(u), &g),
            None => return (g, i),
        }
    }
    let depth = levels.len();
    (g, depth)
}

/// Holt's deterministic Schreier-Sims: level `i` is complete once every Schreier
/// generator of level `i` sifts through the levels below it.
fn build_chain(n: usize, gens: &[Perm]) -> Vec<Level> {
    let mut levels: Vec<Level> = Vec::new();
    let gens: Vec<&Perm> = gens.iter().filter(|g| !is_identity(g)).collect();
    if gens.is_empty() {
        return levels;
    }
    // initial base: for each generator ensure some base point is moved
    for g in &gens {
        if levels.iter().all(|l| g[l.base] as usize == l.base) {
            let b = g.iter().enumerate().find(|&(x, &y)| y as usize != x).unwrap().0;
            levels.push(Level::new(n, b));
        }
    }
    for g in &gens {
        let fixed = levels.iter().take_while(|l| g[l.base] as usize == l.base).count();
        for level in levels.iter_mut().take(fixed + 1) {
            level.gens.push((*g).clone());
        }
    }
    for level in levels.iter_mut() {
        level.grow_orbit();
    }
    let mut tested: Vec<HashSet<(usize, usize)>> = vec![HashSet::new(); levels.len()];
    let mut i = levels.len() as isize - 1;
    'outer: while i >= 0 {
        let li = i as usize;
        let mut k = 0;
        while k < levels[li].orbit.len() {
            let y = levels[li].orbit[k];
            k += 1;
            for s in 0..levels[li].gens.len() {
                if !tested[li].insert((y, s)) {
                    continue;
                }
                let level = &levels[li];
                let gen = &level.gens[s];
                let z = gen[y] as usize;
                let h = compose(
                    &inverse(level.reps[z].as_ref().unwrap()),
                    &compose(gen, level.reps[y].as_ref().unwrap()),
                );
                let (residue, at) = sift(&levels, li + 1, h);
                if is_identity(&residue) {
                    continue;
                }
                if at == levels.len() {
                    let b = residue.iter().enumerate().find(|&(x, &y)| y as usize != x).unwrap().0;
                    levels.push(Level::new(n, b));
                    tested.push(HashSet::new());
                }
                for level in &mut levels[li + 1..=at] {
                    level.gens.push(residue.clone());
                    level.grow_orbit();
                }
                i = at as isize;
                continue 'outer;
            }
        }
        i -= 1;
    }
    levels
}

/// Order of the group generated by the action, by a stabiliser chain.
pub fn schreier_order(action: &GenAction) -> Result<BigUint> {
    let n = action.degree();
    if n > MAX_DEGREE {
        return Err(Error::ScaleBound(format!("Schreier-Sims limited to degree {MAX_DEGREE}, got {n}")));
    }
    let levels = build_chain(n, action.gens());
    Ok(levels.iter().map(|l| BigUint::from(l.orbit.len())).product())
}
