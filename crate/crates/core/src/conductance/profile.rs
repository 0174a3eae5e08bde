use std::fmt::Write as _;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{for_each_connected_set, SetQuery, DEFAULT_BUDGET};
use super::local_search::LocalSearch;
use super::Phi;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rational::{render, to_f64};

/// How Φ is minimized over a window.
#[derive(Clone, Debug)]
pub enum Mode {
    /// Enumerate every connected set in the window; fails when the budget is exhausted.
    Exact { budget: u64 },
    /// Randomized search; the result is an upper bound on the true minimum.
    LocalSearch(LocalSearch),
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Exact { budget: DEFAULT_BUDGET }
    }
}

/// Closed integer window `lo ≤ e(S) ≤ hi` on volume, plus a cap on `|S|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VolumeWindow {
    pub lo: usize,
    pub hi: usize,
    pub max_size: usize,
}

impl VolumeWindow {
    /// `x·m ≤ e(S) ≤ 2x·m`.
    pub fn for_scale(m: usize, x: f64) -> Self {
        VolumeWindow {
            lo: (x * m as f64).ceil() as usize,
            hi: (2.0 * x * m as f64).floor() as usize,
            max_size: usize::MAX,
        }
    }

    /// The window at `x = 2^-i`, computed in integers.
    pub fn dyadic(m: usize, i: u32) -> Self {
        let lo = m.div_ceil(1usize << i);
        let hi = (2 * m) >> i;
        VolumeWindow { lo, hi, max_size: usize::MAX }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || self.max_size == 0
    }

    pub fn contains(&self, volume: usize, size: usize) -> bool {
        self.lo <= volume && volume <= self.hi && size <= self.max_size
    }
}

/// Φ over one window.
#[derive(Clone, Debug, Serialize)]
pub struct ScaleEntry {
    /// Scale index `i` (x = 2^-i); zero for a free-standing window.
    pub i: u32,
    pub x: f64,
    pub window: VolumeWindow,
    /// `None` means +∞: no connected set fits the window.
    pub phi: Option<Phi>,
    pub witness: Option<VertexSet>,
    /// True when `phi` is the certified minimum (exact enumeration).
    pub certified: bool,
}

impl ScaleEntry {
    pub fn phi_value(&self) -> f64 {
        self.phi.map_or(f64::INFINITY, |p| p.value())
    }
}

/// The profile `Φ(2^-i)` for `i = 1..=⌈log₂ m⌉`.
#[derive(Clone, Debug, Serialize)]
pub struct ScaleProfile {
    pub m: usize,
    pub entries: Vec<ScaleEntry>,
}

impl ScaleProfile {
    pub const CSV_HEADER: &'static str = "i,x,phi,volume_lo,volume_hi,certified,witness_size";

    pub fn certified(&self) -> bool {
        self.entries.iter().all(|e| e.certified)
    }

    /// One row per scale; `phi` is `inf` and `witness_size` empty when the window is empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", Self::CSV_HEADER);
        for e in &self.entries {
            let _ = writeln!(out, "{}", e.csv_row());
        }
        out
    }
}

impl ScaleEntry {
    pub(crate) fn csv_row(&self) -> String {
        let phi = self.phi.map_or_else(|| "inf".to_string(), |p| format!("{}", p.value()));
        let witness = self.witness.as_ref().map_or_else(String::new, |w| w.len().to_string());
        format!("{},{},{},{},{},{},{}", self.i, self.x, phi, self.window.lo, self.window.hi, self.certified, witness)
    }
}

/// Σ_{i=1}^{⌈log₂ m⌉} Φ⁻²(2^-i) with the profile it was computed from.
#[derive(Clone, Debug)]
pub struct FrBound {
    pub sum: f64,
    /// Exact value when every scale is certified.
    pub sum_exact: Option<BigRational>,
    pub profile: ScaleProfile,
}

impl FrBound {
    /// True when `sum` is exact; otherwise it only bounds the true sum from below.
    pub fn certified(&self) -> bool {
        self.profile.certified()
    }

    pub fn to_json(&self) -> String {
        let scales: Vec<_> = self
            .profile
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "i": e.i,
                    "x": e.x,
                    "phi": e.phi.map(|p| p.value()),
                    "phi_exact": e.phi.map(|p| render(&p.exact())),
                    "volume_lo": e.window.lo,
                    "volume_hi": e.window.hi,
                    "certified": e.certified,
                    "witness": e.witness,
                })
            })
            .collect();
        serde_json::json!({
            "m": self.profile.m,
            "sum": self.sum,
            "sum_exact": self.sum_exact.as_ref().map(render),
            "certified": self.certified(),
            "estimate": if self.certified() { "exact" } else { "lower" },
            "scales": scales,
        })
        .to_string()
    }
}

/// `⌈log₂ m⌉`, with zero scales for `m ≤ 1`.
pub fn scale_count(m: usize) -> u32 {
    if m <= 1 {
        0
    } else {
        usize::BITS - (m - 1).leading_zeros()
    }
}

type Best = Option<(Phi, VertexSet)>;

fn better(best: &Best, phi: Phi, set: &[usize]) -> bool {
    match best {
        None => true,
        Some((b, w)) => phi < *b || (phi == *b && set < w.as_slice()),
    }
}

/// Exact minima for several windows from a single enumeration.
fn exact_minima(g: &Graph, windows: &[VolumeWindow], budget: u64) -> Result<Vec<Best>> {
    let live: Vec<&VolumeWindow> = windows.iter().filter(|w| !w.is_empty()).collect();
    let mut best: Vec<Best> = vec![None; windows.len()];
    if live.is_empty() {
        return Ok(best);
    }
    let (min_deg, max_deg) = (g.min_degree().max(1), g.max_degree().max(1));
    let max_volume = live.iter().map(|w| w.hi).max().unwrap_or(0);
    let min_volume = live.iter().map(|w| w.lo).min().unwrap_or(0);
    let max_size = live.iter().map(|w| w.max_size.min(w.hi / min_deg)).max().unwrap_or(0);
    let query = SetQuery {
        containing: None,
        max_size,
        max_volume,
        min_size: min_volume.div_ceil(max_deg).max(1),
        min_volume,
        budget,
    };
    for_each_connected_set(g, &query, |view| {
        let phi = Phi { cut: view.cut(), volume: view.volume };
        let mut sorted: Option<VertexSet> = None;
        for (w, slot) in windows.iter().zip(best.iter_mut()) {
            if w.is_empty() || !w.contains(view.volume, view.vertices.len()) {
                continue;
            }
            let set = sorted.get_or_insert_with(|| view.sorted());
            if better(slot, phi, set) {
                *slot = Some((phi, set.clone()));
            }
        }
    })?;
    Ok(best)
}

fn ensure_connected(g: &Graph) -> Result<()> {
    if g.n() == 0 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

fn into_entry(i: u32, x: f64, window: VolumeWindow, best: Best, certified: bool) -> ScaleEntry {
    let (phi, witness) = match best {
        Some((p, w)) => (Some(p), Some(w)),
        None => (None, None),
    };
    ScaleEntry { i, x, window, phi, witness, certified }
}

fn minimize(g: &Graph, windows: &[VolumeWindow], mode: &Mode) -> Result<(Vec<Best>, bool)> {
    match mode {
        Mode::Exact { budget } => Ok((exact_minima(g, windows, *budget)?, true)),
        Mode::LocalSearch(search) => {
            let found = windows
                .par_iter()
                .enumerate()
                .map(|(idx, w)| if w.is_empty() { None } else { search.run(g, w, idx as u64) })
                .collect();
            Ok((found, false))
        }
    }
}

/// Minimum conductance over connected sets whose volume lies in `window`.
///
/// An empty window gives `phi = None` (+∞). Empty windows are certified in
/// either mode since there is nothing to search.
pub fn phi_in_window(g: &Graph, window: VolumeWindow, mode: &Mode) -> Result<ScaleEntry> {
    ensure_connected(g)?;
    let (mut best, certified) = minimize(g, &[window], mode)?;
    Ok(into_entry(0, f64::NAN, window, best.remove(0), certified || window.is_empty()))
}

/// Φ(x): minimum of Φ(S) over connected `S` with `x·m ≤ e(S) ≤ 2x·m`.
pub fn phi_at_scale(g: &Graph, x: f64, mode: &Mode) -> Result<ScaleEntry> {
    if !(x > 0.0 && x <= 0.5) {
        return Err(Error::invalid(format!("scale x = {x} outside (0, 1/2]")));
    }
    let mut entry = phi_in_window(g, VolumeWindow::for_scale(g.m(), x), mode)?;
    entry.x = x;
    Ok(entry)
}

/// The size-capped variant with window `x·n(c/2+k)/2 ≤ e(S) ≤ 4x·n(c/2+k)` and
/// `|S| ≤ max_size`, used to compare against Φ(x) on sampled small worlds.
pub fn phi0_at_scale(g: &Graph, x: f64, c: f64, k: usize, max_size: usize, mode: &Mode) -> Result<ScaleEntry> {
    let unit = g.n() as f64 * (c / 2.0 + k as f64);
    let window = VolumeWindow {
        lo: (x * unit / 2.0).ceil() as usize,
        hi: (4.0 * x * unit).floor() as usize,
        max_size,
    };
    let mut entry = phi_in_window(g, window, mode)?;
    entry.x = x;
    Ok(entry)
}

/// The dyadic profile and the sum Σ Φ⁻²(2^-i), with +∞ scales contributing zero.
///
/// In local-search mode each Φ is an upper bound, so the sum is a lower estimate.
pub fn fr_bound(g: &Graph, mode: &Mode) -> Result<FrBound> {
    ensure_connected(g)?;
    let m = g.m();
    let scales: Vec<u32> = (1..=scale_count(m)).collect();
    let windows: Vec<VolumeWindow> = scales.iter().map(|&i| VolumeWindow::dyadic(m, i)).collect();
    let (best, certified) = minimize(g, &windows, mode)?;
    let entries: Vec<ScaleEntry> = scales
        .iter()
        .zip(windows)
        .zip(best)
        .map(|((&i, w), b)| into_entry(i, 0.5f64.powi(i as i32), w, b, certified || w.is_empty()))
        .collect();
    let exact = entries
        .iter()
        .filter_map(|e| e.phi)
        .map(|p| p.inverse_square().ok_or_else(|| Error::Validation("zero conductance on a connected graph".into())))
        .sum::<Result<BigRational>>()?;
    let profile = ScaleProfile { m, entries };
    let sum = to_f64(&exact);
    let sum_exact = profile.certified().then_some(exact);
    Ok(FrBound { sum, sum_exact, profile })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;

    #[test]
    fn scale_counts() {
        assert_eq!(scale_count(1), 0);
        assert_eq!(scale_count(2), 1);
        assert_eq!(scale_count(16), 4);
        assert_eq!(scale_count(17), 5);
    }

    #[test]
    fn dyadic_windows_match_real_windows() {
        for m in 1..200 {
            for i in 1..=scale_count(m) {
                assert_eq!(VolumeWindow::dyadic(m, i), VolumeWindow::for_scale(m, 0.5f64.powi(i as i32)));
            }
        }
    }

    #[test]
    fn empty_window_on_k2_is_infinite() {
        let e = phi_at_scale(&Graph::complete(2), 0.25, &Mode::default()).unwrap();
        assert!(e.window.is_empty());
        assert_eq!(e.phi, None);
        assert_eq!(e.phi_value(), f64::INFINITY);
        assert!(fr_bound(&Graph::complete(2), &Mode::default()).unwrap().profile.entries.is_empty());
    }

    #[test]
    fn cycle_scale_is_longest_arc() {
        // m = 20; x = 1/4 admits volumes 5..=10, i.e. arcs of length 3..=5.
        let g = cycle(20).unwrap();
        let e = phi_at_scale(&g, 0.25, &Mode::default()).unwrap();
        assert_eq!(e.phi, Some(Phi { cut: 1, volume: 5 }));
        assert_eq!(e.witness, Some(vec![0, 1, 2, 3, 4]));
        assert!(e.certified);
    }

    #[test]
    fn rejects_bad_scale() {
        let g = cycle(8).unwrap();
        assert!(phi_at_scale(&g, 0.0, &Mode::default()).is_err());
        assert!(phi_at_scale(&g, 0.6, &Mode::default()).is_err());
    }

    #[test]
    fn budget_errors_in_exact_mode() {
        let g = Graph::complete(14);
        assert!(matches!(fr_bound(&g, &Mode::Exact { budget: 1000 }), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn csv_layout() {
        let fr = fr_bound(&cycle(8).unwrap(), &Mode::default()).unwrap();
        let csv = fr.profile.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(ScaleProfile::CSV_HEADER));
        assert_eq!(lines.next(), Some("1,0.5,0.25,4,8,true,4"));
        assert_eq!(csv.lines().count(), 1 + 3);
    }
}
