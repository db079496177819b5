//! Maximum-weight matching in general undirected graphs.
//!
//! Primal-dual blossom method following Galil's formulation, structured
//! after Joris van Rantwijk's well-known implementation. Weights are
//! arbitrary i128 integers; with `max_cardinality` the result is a
//! maximum-weight matching among maximum-cardinality matchings (used for
//! perfect-matching reductions).

use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

fn wrap_index(j: isize, len: usize) -> usize {
    let len = len as isize;
    (((j % len) + len) % len) as usize
}

struct Matcher<'a> {
    nvertex: usize,
    nedge: usize,
    edges: &'a [(usize, usize, i128)],
    max_cardinality: bool,
    endpoint: Vec<usize>,
    neighbend: Vec<Vec<usize>>,
    mate: Vec<usize>,
    label: Vec<u8>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    blossombestedges: Vec<Vec<usize>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<i128>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(nvertex: usize, edges: &'a [(usize, usize, i128)], max_cardinality: bool) -> Self {
        let nedge = edges.len();
        let maxweight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut endpoint = Vec::with_capacity(2 * nedge);
        for &(i, j, _) in edges {
            endpoint.push(i);
            endpoint.push(j);
        }
        let mut neighbend = vec![Vec::new(); nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dualvar = vec![maxweight; nvertex];
        dualvar.extend(vec![0i128; nvertex]);
        Matcher {
            nvertex,
            nedge,
            edges,
            max_cardinality,
            endpoint,
            neighbend,
            mate: vec![NONE; nvertex],
            label: vec![0; 2 * nvertex],
            labelend: vec![NONE; 2 * nvertex],
            inblossom: (0..nvertex).collect(),
            blossomparent: vec![NONE; 2 * nvertex],
            blossomchilds: vec![Vec::new(); 2 * nvertex],
            blossombase: (0..nvertex).chain(std::iter::repeat_n(NONE, nvertex)).collect(),
            blossomendps: vec![Vec::new(); 2 * nvertex],
            bestedge: vec![NONE; 2 * nvertex],
            blossombestedges: vec![Vec::new(); 2 * nvertex],
            unusedblossoms: (nvertex..2 * nvertex).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    fn slack(&self, k: usize) -> i128 {
        let (i, j, wt) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * wt
    }

    fn blossom_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.nvertex {
            out.push(b);
        } else {
            for &t in &self.blossomchilds[b] {
                self.blossom_leaves(t, out);
            }
        }
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.blossom_leaves(b, &mut out);
        out
    }

    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == 1 {
            let lv = self.leaves(b);
            self.queue.extend(lv);
        } else if t == 2 {
            let base = self.blossombase[b];
            debug_assert!(self.mate[base] != NONE);
            let m = self.mate[base];
            self.assign_label(self.endpoint[m], 1, m ^ 1);
        }
    }

    fn scan_blossom(&mut self, v0: usize, w0: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v0;
        let mut w = w0;
        while v != NONE || w != NONE {
            if v != NONE {
                let mut b = self.inblossom[v];
                if self.label[b] & 4 != 0 {
                    base = self.blossombase[b];
                    break;
                }
                debug_assert_eq!(self.label[b], 1);
                path.push(b);
                self.label[b] = 5;
                debug_assert_eq!(self.labelend[b], self.mate[self.blossombase[b]]);
                if self.labelend[b] == NONE {
                    v = NONE;
                } else {
                    v = self.endpoint[self.labelend[b]];
                    b = self.inblossom[v];
                    debug_assert_eq!(self.label[b], 2);
                    debug_assert!(self.labelend[b] != NONE);
                    v = self.endpoint[self.labelend[b]];
                }
            } else {
                v = NONE;
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom pool exhausted");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            debug_assert!(
                self.label[bv] == 2
                    || (self.label[bv] == 1 && self.labelend[bv] == self.mate[self.blossombase[bv]])
            );
            debug_assert!(self.labelend[bv] != NONE);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            debug_assert!(
                self.label[bw] == 2
                    || (self.label[bw] == 1 && self.labelend[bw] == self.mate[self.blossombase[bw]])
            );
            debug_assert!(self.labelend[bw] != NONE);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        debug_assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        for v in self.leaves(b) {
            if self.label[self.inblossom[v]] == 2 {
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        for &bv in &path {
            let nblists: Vec<Vec<usize>> = if self.blossombestedges[bv].is_empty() {
                self.leaves(bv)
                    .into_iter()
                    .map(|v| self.neighbend[v].iter().map(|&p| p / 2).collect())
                    .collect()
            } else {
                vec![self.blossombestedges[bv].clone()]
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.blossombestedges[bv] = Vec::new();
            self.bestedge[bv] = NONE;
        }
        self.blossombestedges[b] = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for idx in 0..self.blossombestedges[b].len() {
            let k = self.blossombestedges[b][idx];
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = k;
            }
        }
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for v in self.leaves(s) {
                    self.inblossom[v] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            debug_assert!(self.labelend[b] != NONE);
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let childs = &self.blossomchilds[b];
            let mut j = childs.iter().position(|&c| c == entrychild).unwrap() as isize;
            let len = childs.len() as isize;
            let (jstep, endptrick): (isize, usize) = if j & 1 != 0 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let clen = self.blossomchilds[b].len();
            let mut p = self.labelend[b];
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = 0;
                let ep = self.blossomendps[b][wrap_index(j - endptrick as isize, clen)] ^ endptrick ^ 1;
                self.label[self.endpoint[ep]] = 0;
                self.assign_label(self.endpoint[p ^ 1], 2, p);
                self.allowedge[self.blossomendps[b][wrap_index(j - endptrick as isize, clen)] / 2] = true;
                j += jstep;
                p = self.blossomendps[b][wrap_index(j - endptrick as isize, clen)] ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = self.blossomchilds[b][wrap_index(j, clen)];
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.labelend[self.endpoint[p ^ 1]] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            j += jstep;
            while self.blossomchilds[b][wrap_index(j, clen)] != entrychild {
                let bv = self.blossomchilds[b][wrap_index(j, clen)];
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut vfound = NONE;
                for v in self.leaves(bv) {
                    if self.label[v] != 0 {
                        vfound = v;
                        break;
                    }
                }
                if vfound != NONE {
                    debug_assert_eq!(self.label[vfound], 2);
                    debug_assert_eq!(self.inblossom[vfound], bv);
                    self.label[vfound] = 0;
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0;
                    let le = self.labelend[vfound];
                    self.assign_label(vfound, 2, le);
                }
                j += jstep;
            }
        }
        self.label[b] = 0;
        self.labelend[b] = NONE;
        self.blossomchilds[b] = Vec::new();
        self.blossomendps[b] = Vec::new();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = Vec::new();
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap() as isize;
        let mut j = i;
        let len = self.blossomchilds[b].len() as isize;
        let (jstep, endptrick): (isize, usize) = if i & 1 != 0 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        let clen = self.blossomchilds[b].len();
        while j != 0 {
            j += jstep;
            let t = self.blossomchilds[b][wrap_index(j, clen)];
            let p = self.blossomendps[b][wrap_index(j - endptrick as isize, clen)] ^ endptrick;
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            let t = self.blossomchilds[b][wrap_index(j, clen)];
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        let i = i as usize;
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert_eq!(self.blossombase[b], v);
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                debug_assert_eq!(self.label[bs], 1);
                debug_assert_eq!(self.labelend[bs], self.mate[self.blossombase[bs]]);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                debug_assert_eq!(self.label[bt], 2);
                debug_assert!(self.labelend[bt] != NONE);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                debug_assert_eq!(self.blossombase[bt], t);
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn verify_optimum(&self) {
        let vdualoffset = if self.max_cardinality {
            (-self.dualvar[..self.nvertex].iter().min().copied().unwrap_or(0)).max(0)
        } else {
            0
        };
        assert!(self.dualvar[..self.nvertex].iter().min().copied().unwrap_or(0) + vdualoffset >= 0);
        assert!(self.dualvar[self.nvertex..].iter().min().copied().unwrap_or(0) >= 0);
        for k in 0..self.nedge {
            let (i, j, wt) = self.edges[k];
            let mut s = self.dualvar[i] + self.dualvar[j] - 2 * wt;
            let chain = |mut x: usize| {
                let mut out = vec![x];
                while self.blossomparent[x] != NONE {
                    x = self.blossomparent[x];
                    out.push(x);
                }
                out.reverse();
                out
            };
            let bi = chain(i);
            let bj = chain(j);
            for (a, b) in bi.iter().zip(bj.iter()) {
                if a != b {
                    break;
                }
                s += 2 * self.dualvar[*a];
            }
            assert!(s >= 0, "negative slack on edge {k}");
            let mi = self.mate[i];
            let mj = self.mate[j];
            if (mi != NONE && mi / 2 == k) || (mj != NONE && mj / 2 == k) {
                assert!(mi != NONE && mj != NONE && mi / 2 == k && mj / 2 == k);
                assert_eq!(s, 0, "matched edge {k} has nonzero slack");
            }
        }
        for v in 0..self.nvertex {
            assert!(self.mate[v] != NONE || self.dualvar[v] + vdualoffset == 0);
        }
        for b in self.nvertex..2 * self.nvertex {
            if self.blossombase[b] != NONE && self.dualvar[b] > 0 {
                assert_eq!(self.blossomendps[b].len() % 2, 1);
                for p in self.blossomendps[b].iter().skip(1).step_by(2) {
                    assert_eq!(self.mate[self.endpoint[*p]], p ^ 1);
                    assert_eq!(self.mate[self.endpoint[p ^ 1]], *p);
                }
            }
        }
    }

    fn run(&mut self) -> Vec<Option<usize>> {
        for _ in 0..self.nvertex {
            self.label.iter_mut().for_each(|l| *l = 0);
            self.bestedge.iter_mut().for_each(|e| *e = NONE);
            for be in self.blossombestedges[self.nvertex..].iter_mut() {
                *be = Vec::new();
            }
            self.allowedge.iter_mut().for_each(|a| *a = false);
            self.queue.clear();
            for v in 0..self.nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    if augmented {
                        break;
                    }
                    debug_assert_eq!(self.label[self.inblossom[v]], 1);
                    let neigh = self.neighbend[v].clone();
                    for p in neigh {
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let kslack = self.slack(k);
                        if !self.allowedge[k] && kslack <= 0 {
                            self.allowedge[k] = true;
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == 0 {
                                self.assign_label(w, 2, p ^ 1);
                            } else if self.label[self.inblossom[w]] == 1 {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                debug_assert_eq!(self.label[self.inblossom[w]], 2);
                                self.label[w] = 2;
                                self.labelend[w] = p ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b]) {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == 0
                            && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w]))
                        {
                            self.bestedge[w] = k;
                        }
                    }
                    if augmented {
                        break;
                    }
                }
                if augmented {
                    break;
                }
                // Dual adjustment.
                let mut deltatype: i8 = -1;
                let mut delta: i128 = 0;
                let mut deltaedge: usize = NONE;
                let mut deltablossom: usize = NONE;
                if !self.max_cardinality {
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex].iter().min().copied().unwrap_or(0);
                }
                for v in 0..self.nvertex {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }
                for b in 0..2 * self.nvertex {
                    if self.blossomparent[b] == NONE && self.label[b] == 1 && self.bestedge[b] != NONE {
                        let kslack = self.slack(self.bestedge[b]);
                        debug_assert_eq!(kslack % 2, 0);
                        let d = kslack / 2;
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                        && (deltatype == -1 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == -1 {
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex].iter().min().copied().unwrap_or(0).max(0);
                }
                for v in 0..self.nvertex {
                    match self.label[self.inblossom[v]] {
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }
                match deltatype {
                    1 => break,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        debug_assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        debug_assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(deltablossom, false),
                    _ => unreachable!(),
                }
            }
            if !augmented {
                break;
            }
            for b in self.nvertex..2 * self.nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == 1
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
        self.verify_optimum();
        (0..self.nvertex)
            .map(|v| {
                if self.mate[v] == NONE {
                    None
                } else {
                    Some(self.endpoint[self.mate[v]])
                }
            })
            .collect()
    }
}

/// Computes a maximum-weight matching; returns `mate[v]`. With
/// `max_cardinality`, maximizes weight among maximum-cardinality matchings.
pub fn max_weight_matching(
    nvertex: usize,
    edges: &[(usize, usize, i128)],
    max_cardinality: bool,
) -> Result<Vec<Option<usize>>> {
    for &(i, j, _) in edges {
        if i == j || i >= nvertex || j >= nvertex {
            return Err(Error::InvalidEdge(i, j));
        }
    }
    if edges.is_empty() {
        return Ok(vec![None; nvertex]);
    }
    Ok(Matcher::new(nvertex, edges, max_cardinality).run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn matching_weight(edges: &[(usize, usize, i128)], mate: &[Option<usize>]) -> i128 {
        edges
            .iter()
            .filter(|&&(i, j, _)| mate[i] == Some(j))
            .map(|&(_, _, w)| w)
            .sum()
    }

    fn brute_best(
        nvertex: usize,
        edges: &[(usize, usize, i128)],
        max_cardinality: bool,
    ) -> (i128, usize) {
        // Enumerate all matchings recursively.
        fn rec(
            edges: &[(usize, usize, i128)],
            idx: usize,
            used: &mut Vec<bool>,
            w: i128,
            c: usize,
            best: &mut Vec<(i128, usize)>,
        ) {
            if idx == edges.len() {
                best.push((w, c));
                return;
            }
            rec(edges, idx + 1, used, w, c, best);
            let (i, j, wt) = edges[idx];
            if !used[i] && !used[j] {
                used[i] = true;
                used[j] = true;
                rec(edges, idx + 1, used, w + wt, c + 1, best);
                used[i] = false;
                used[j] = false;
            }
        }
        let mut all = Vec::new();
        rec(edges, 0, &mut vec![false; nvertex], 0, 0, &mut all);
        if max_cardinality {
            let maxc = all.iter().map(|&(_, c)| c).max().unwrap();
            (all.iter().filter(|&&(_, c)| c == maxc).map(|&(w, _)| w).max().unwrap(), maxc)
        } else {
            (all.iter().map(|&(w, _)| w).max().unwrap(), 0)
        }
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(max_weight_matching(3, &[], false).unwrap(), vec![None, None, None]);
        let m = max_weight_matching(2, &[(0, 1, 5)], false).unwrap();
        assert_eq!(m, vec![Some(1), Some(0)]);
        // A zero-weight edge need not be matched, but weight must be 0.
        let m = max_weight_matching(2, &[(0, 1, 0)], false).unwrap();
        assert_eq!(matching_weight(&[(0, 1, 0)], &m), 0);
    }

    #[test]
    fn known_blossom_cases() {
        // Classic tricky cases from the reference implementation's suite.
        // Create S-blossom and use it for augmentation.
        let edges = [(0, 1, 8), (0, 2, 9), (1, 2, 10), (2, 3, 7)];
        let m = max_weight_matching(4, &edges, false).unwrap();
        assert_eq!(m, vec![Some(1), Some(0), Some(3), Some(2)]);
        // Create nested S-blossom, use for augmentation.
        let edges = [(0, 1, 9), (0, 2, 9), (1, 2, 10), (1, 3, 8), (2, 4, 8), (3, 4, 10), (4, 5, 6)];
        let m = max_weight_matching(6, &edges, false).unwrap();
        assert_eq!(m, vec![Some(2), Some(3), Some(0), Some(1), Some(5), Some(4)]);
        // Create S-blossom, relabel as T-blossom, use for augmentation.
        let edges = [(0, 1, 9), (0, 2, 8), (1, 2, 10), (0, 3, 5), (3, 4, 4), (0, 5, 3)];
        let m = max_weight_matching(6, &edges, false).unwrap();
        assert_eq!(m, vec![Some(5), Some(2), Some(1), Some(4), Some(3), Some(0)]);
        // Create nested S-blossom, augment, expand recursively. Several
        // optima exist; check weight and consistency.
        let edges = [
            (0, 1, 40), (0, 2, 40), (1, 2, 60), (1, 3, 55), (2, 4, 55), (3, 4, 50),
            (0, 7, 15), (4, 6, 30), (6, 5, 10), (7, 5, 10), (3, 7, 30),
        ];
        let m = max_weight_matching(8, &edges, false).unwrap();
        for (v, mate) in m.iter().enumerate() {
            if let Some(u) = mate {
                assert_eq!(m[*u], Some(v));
            }
        }
        assert_eq!(matching_weight(&edges, &m), 135);
    }

    #[test]
    fn max_cardinality_with_negative_weights() {
        let edges = [(0, 1, 2), (0, 2, -2), (1, 2, 1), (1, 3, -1), (2, 3, -6)];
        let m = max_weight_matching(4, &edges, false).unwrap();
        assert_eq!(m, vec![Some(1), Some(0), None, None]);
        let m = max_weight_matching(4, &edges, true).unwrap();
        assert_eq!(m, vec![Some(2), Some(3), Some(0), Some(1)]);
    }

    #[test]
    fn random_cross_check_against_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xb10550);
        for trial in 0..160 {
            let n = rng.gen_range(2..=8);
            let maxcard = trial % 2 == 0;
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.75) {
                        let w: i128 = if maxcard {
                            rng.gen_range(-30..=50)
                        } else {
                            rng.gen_range(0..=50)
                        };
                        edges.push((i, j, w));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let mate = max_weight_matching(n, &edges, maxcard).unwrap();
            for (v, m) in mate.iter().enumerate() {
                if let Some(u) = m {
                    assert_eq!(mate[*u], Some(v));
                }
            }
            let got = matching_weight(&edges, &mate);
            let card = mate.iter().flatten().count() / 2;
            let (want, wantc) = brute_best(n, &edges, maxcard);
            if maxcard {
                assert_eq!(card, wantc, "cardinality mismatch on trial {trial}");
            }
            assert_eq!(got, want, "weight mismatch on trial {trial}: {edges:?}");
        }
    }

    #[test]
    fn large_uniform_instances_terminate() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in [20usize, 40] {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    edges.push((i, j, rng.gen_range(0..1000) as i128));
                }
            }
            let mate = max_weight_matching(n, &edges, true).unwrap();
            assert_eq!(mate.iter().flatten().count(), n);
        }
    }
}
