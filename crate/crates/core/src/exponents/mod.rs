//! Piecewise variable exponents p(·) with declared per-piece bounds.
//!
//! Every estimate downstream consumes only per-region infima and suprema, so
//! a field is stored as an ordered list of `(Region, ExponentPiece)` pairs
//! plus a default piece, and bounds over a region are read off the pieces it
//! meets instead of being optimised globally.

mod log_holder;
mod presets;

use std::fmt;
use std::sync::Arc;

pub use log_holder::{log_holder_diagnostic, LogHolderReport};
pub use presets::{best_rational, ratio_from_f64, Preset, PresetKind};

use crate::regions::{sampling, Region};
use crate::{Error, Point, Result};

pub type ExponentFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;

/// One piece of a variable exponent.
#[derive(Clone)]
pub enum ExponentPiece {
    /// Constant value in [1, +∞]. +∞ is only representable here.
    Constant(f64),
    /// Finite-valued callable with declared essential bounds.
    Variable { eval: ExponentFn, inf: f64, sup: f64 },
}

impl fmt::Debug for ExponentPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentPiece::Constant(v) => write!(f, "Constant({v})"),
            ExponentPiece::Variable { inf, sup, .. } => write!(f, "Variable[{inf}, {sup}]"),
        }
    }
}

impl ExponentPiece {
    pub fn constant(value: f64) -> Result<Self> {
        if value >= 1.0 {
            Ok(ExponentPiece::Constant(value))
        } else {
            Err(Error::ExponentOutOfRange(format!("constant exponent {value} is below 1")))
        }
    }

    pub fn variable(eval: impl Fn(&Point) -> f64 + Send + Sync + 'static, inf: f64, sup: f64) -> Result<Self> {
        if !(1.0 <= inf && inf <= sup && sup.is_finite()) {
            return Err(Error::ExponentOutOfRange(format!(
                "variable piece needs 1 ≤ inf ≤ sup < ∞, got [{inf}, {sup}]"
            )));
        }
        Ok(ExponentPiece::Variable { eval: Arc::new(eval), inf, sup })
    }

    pub fn inf(&self) -> f64 {
        match self {
            ExponentPiece::Constant(v) => *v,
            ExponentPiece::Variable { inf, .. } => *inf,
        }
    }

    pub fn sup(&self) -> f64 {
        match self {
            ExponentPiece::Constant(v) => *v,
            ExponentPiece::Variable { sup, .. } => *sup,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExponentPiece::Constant(v) if v.is_infinite())
    }

    #[inline]
    pub fn value_at(&self, x: &Point) -> f64 {
        match self {
            ExponentPiece::Constant(v) => *v,
            ExponentPiece::Variable { eval, .. } => eval(x),
        }
    }

    /// Pointwise `p ↦ p/(p−k)`; +∞ maps to 1. Bounds swap roles.
    fn conjugate(&self, k: f64) -> Result<Self> {
        let conj = move |p: f64| if p.is_infinite() { 1.0 } else { p / (p - k) };
        if !self.is_infinite() && self.inf() <= k {
            return Err(Error::ExponentOutOfRange(format!(
                "conjugate with numerator {k} needs inf > {k}, piece has inf = {}",
                self.inf()
            )));
        }
        Ok(match self {
            ExponentPiece::Constant(v) => ExponentPiece::Constant(conj(*v)),
            ExponentPiece::Variable { eval, inf, sup } => {
                let eval = eval.clone();
                ExponentPiece::Variable {
                    eval: Arc::new(move |x| conj(eval(x))),
                    inf: conj(*sup),
                    sup: conj(*inf),
                }
            }
        })
    }

    fn scaled(&self, factor: f64) -> Result<Self> {
        if self.inf() * factor < 1.0 {
            return Err(Error::ExponentOutOfRange(format!(
                "scaling by {factor} takes inf {} below 1",
                self.inf()
            )));
        }
        Ok(match self {
            ExponentPiece::Constant(v) => ExponentPiece::Constant(v * factor),
            ExponentPiece::Variable { eval, inf, sup } => {
                let eval = eval.clone();
                ExponentPiece::Variable {
                    eval: Arc::new(move |x| eval(x) * factor),
                    inf: inf * factor,
                    sup: sup * factor,
                }
            }
        })
    }
}

/// Identifies which piece of a field a point falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PieceId {
    Listed(usize),
    Default,
}

/// A piecewise variable exponent on ℝ³.
#[derive(Clone, Debug)]
pub struct ExponentField {
    pieces: Vec<(Region, ExponentPiece)>,
    default: ExponentPiece,
}

/// Estimated essential bounds of an exponent over a region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EssentialBounds {
    pub inf: f64,
    pub sup: f64,
    /// True when the bounds were read off constant pieces rather than sampled.
    pub exact: bool,
    pub samples: usize,
}

const BOUNDS_SAMPLES: usize = 20_000;

impl ExponentField {
    pub fn new(pieces: Vec<(Region, ExponentPiece)>, default: ExponentPiece) -> Result<Self> {
        for (r, _) in &pieces {
            r.validate()?;
        }
        Ok(ExponentField { pieces, default })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Ok(ExponentField { pieces: Vec::new(), default: ExponentPiece::constant(value)? })
    }

    pub fn pieces(&self) -> &[(Region, ExponentPiece)] {
        &self.pieces
    }

    pub fn default_piece(&self) -> &ExponentPiece {
        &self.default
    }

    pub fn piece(&self, id: PieceId) -> &ExponentPiece {
        match id {
            PieceId::Listed(i) => &self.pieces[i].1,
            PieceId::Default => &self.default,
        }
    }

    pub fn piece_ids(&self) -> impl Iterator<Item = PieceId> {
        (0..self.pieces.len()).map(PieceId::Listed).chain(std::iter::once(PieceId::Default))
    }

    #[inline]
    pub fn piece_of(&self, x: &Point) -> PieceId {
        self.pieces
            .iter()
            .position(|(r, _)| r.contains(x))
            .map_or(PieceId::Default, PieceId::Listed)
    }

    /// p(x), a value in [1, +∞].
    #[inline]
    pub fn evaluate(&self, x: &Point) -> f64 {
        self.piece(self.piece_of(x)).value_at(x)
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.piece_ids().all(|id| matches!(self.piece(id), ExponentPiece::Constant(_)))
    }

    pub fn has_infinite_piece(&self) -> bool {
        self.piece_ids().any(|id| self.piece(id).is_infinite())
    }

    /// The part of `domain` on which piece `id` is in force.
    pub fn piece_domain(&self, id: PieceId, domain: &Region) -> Region {
        match id {
            PieceId::Listed(i) => {
                let mut r = self.pieces[i].0.clone();
                if !domain.is_structural_subset_of(&r) {
                    r = domain.clone().intersect(r);
                } else {
                    r = domain.clone();
                }
                // earlier pieces take precedence
                for (prev, _) in &self.pieces[..i] {
                    r = r.minus(prev.clone());
                }
                r
            }
            PieceId::Default => self
                .pieces
                .iter()
                .fold(domain.clone(), |acc, (r, _)| acc.minus(r.clone())),
        }
    }

    /// Pieces that can meet `domain`, skipping those ruled out structurally.
    pub(crate) fn candidate_pieces(&self, domain: &Region) -> Vec<PieceId> {
        if let Some(i) = self.pieces.iter().position(|(r, _)| domain.is_structural_subset_of(r)) {
            if i == 0 {
                return vec![PieceId::Listed(0)];
            }
        }
        self.piece_ids()
            .filter(|id| match id {
                PieceId::Listed(i) => !domain.is_structurally_disjoint_from(&self.pieces[*i].0),
                PieceId::Default => !self.pieces.iter().any(|(r, _)| domain.is_structural_subset_of(r)),
            })
            .collect()
    }

    /// p⁻ and p⁺ over `region`. Exact for piecewise-constant fields.
    pub fn essential_bounds(&self, region: &Region, seed: u64) -> Result<EssentialBounds> {
        let candidates = self.candidate_pieces(region);
        let mut inf = f64::INFINITY;
        let mut sup = f64::NEG_INFINITY;
        let mut exact = true;
        let mut samples = 0usize;
        let single = candidates.len() == 1;
        for (k, id) in candidates.iter().enumerate() {
            let piece = self.piece(*id);
            let constant = matches!(piece, ExponentPiece::Constant(_));
            if single && constant {
                inf = inf.min(piece.inf());
                sup = sup.max(piece.sup());
                continue;
            }
            let sub = self.piece_domain(*id, region);
            let env = sub.envelope().ok_or_else(|| Error::UnboundedRegion(sub.to_string()))?;
            let u = sampling::uniform_triples(BOUNDS_SAMPLES, seed, 0x0B00 + k as u32, None);
            samples += u.len();
            let mut hit = false;
            for t in u {
                let x = env.map_uniforms(t);
                if !sub.contains(&x) {
                    continue;
                }
                hit = true;
                if constant {
                    break;
                }
                let v = piece.value_at(&x);
                inf = inf.min(v);
                sup = sup.max(v);
            }
            if hit && constant {
                inf = inf.min(piece.inf());
                sup = sup.max(piece.sup());
            }
            if !constant {
                exact = false;
            }
        }
        if inf > sup {
            return Err(Error::InvalidRegion(format!("{region} meets no piece of the exponent")));
        }
        Ok(EssentialBounds { inf, sup, exact, samples })
    }

    /// The field `p(·)/(p(·) − k)`; k = 1 is the Hölder conjugate, k = 2 and
    /// k = 3 the exponents paired with |u|² and |u|³.
    pub fn holder_conjugate(&self, k: u32) -> Result<ExponentField> {
        if !(1..=3).contains(&k) {
            return Err(Error::InvalidArgument(format!("conjugate numerator {k} not in {{1, 2, 3}}")));
        }
        let k = k as f64;
        Ok(ExponentField {
            pieces: self
                .pieces
                .iter()
                .map(|(r, p)| Ok((r.clone(), p.conjugate(k)?)))
                .collect::<Result<_>>()?,
            default: self.default.conjugate(k)?,
        })
    }

    /// The field `factor · p(·)`, e.g. p/2 for the pressure.
    pub fn scaled(&self, factor: f64) -> Result<ExponentField> {
        Ok(ExponentField {
            pieces: self
                .pieces
                .iter()
                .map(|(r, p)| Ok((r.clone(), p.scaled(factor)?)))
                .collect::<Result<_>>()?,
            default: self.default.scaled(factor)?,
        })
    }

    /// Rejection-sampling check that no point of `probe` lies in two listed pieces.
    pub fn check_disjoint(&self, probe: &Region, n: usize, seed: u64) -> Result<()> {
        if self.pieces.len() < 2 {
            return Ok(());
        }
        for x in probe.sample(n, seed)? {
            let hits: Vec<usize> = (0..self.pieces.len()).filter(|&i| self.pieces[i].0.contains(&x)).collect();
            if hits.len() > 1 {
                return Err(Error::InvalidRegion(format!(
                    "pieces {hits:?} overlap at ({}, {}, {})",
                    x.x, x.y, x.z
                )));
            }
        }
        Ok(())
    }
}
