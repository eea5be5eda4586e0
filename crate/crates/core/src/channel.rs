//! Slow-fading channel realizations for the source, relays and destination.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Complex amplitude of one link.
pub type ComplexGain = Complex64;

/// All link gains for one frame. Constant for the whole frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Source to destination.
    pub g0: ComplexGain,
    /// Source to relay `i`.
    pub h: Vec<ComplexGain>,
    /// Relay `k` to destination.
    pub g: Vec<ComplexGain>,
    /// Row-major `n x n`; entry `(k, i)` is the link from relay `k` to relay `i`.
    f: Vec<ComplexGain>,
}

impl ChannelRealization {
    /// Builds a realization from explicit gains. `f[k][i]` is relay `k` to
    /// relay `i`; the diagonal is forced to zero.
    pub fn new(
        g0: ComplexGain,
        h: Vec<ComplexGain>,
        g: Vec<ComplexGain>,
        f: Vec<Vec<ComplexGain>>,
    ) -> crate::Result<Self> {
        let n = h.len();
        if g.len() != n || f.len() != n || f.iter().any(|row| row.len() != n) {
            return Err(crate::Error::DimensionMismatch(format!(
                "h has {} entries, g has {}, f is {}x?",
                n,
                g.len(),
                f.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (k, row) in f.into_iter().enumerate() {
            for (i, v) in row.into_iter().enumerate() {
                flat.push(if i == k { ComplexGain::new(0.0, 0.0) } else { v });
            }
        }
        Ok(Self { g0, h, g, f: flat })
    }

    /// Realization with no inter-relay links.
    pub fn isolated(g0: ComplexGain, h: Vec<ComplexGain>, g: Vec<ComplexGain>) -> crate::Result<Self> {
        let n = h.len();
        Self::new(g0, h, g, vec![vec![ComplexGain::new(0.0, 0.0); n]; n])
    }

    pub fn n_relays(&self) -> usize {
        self.h.len()
    }

    /// Link gain from relay `from` to relay `to`.
    #[inline]
    pub fn f(&self, from: usize, to: usize) -> ComplexGain {
        self.f[from * self.h.len() + to]
    }

    pub fn is_isolated(&self) -> bool {
        self.f.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// All gains in draw order: `g0`, `h`, `g`, then off-diagonal `f` rows.
    pub fn gains(&self) -> impl Iterator<Item = ComplexGain> + '_ {
        let n = self.h.len();
        std::iter::once(self.g0)
            .chain(self.h.iter().copied())
            .chain(self.g.iter().copied())
            .chain(
                (0..n)
                    .flat_map(move |k| (0..n).map(move |i| (k, i)))
                    .filter(|(k, i)| k != i)
                    .map(|(k, i)| self.f(k, i)),
            )
    }
}

/// Circularly-symmetric complex Gaussian sample with `E|x|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> ComplexGain {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    ComplexGain::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Draws one frame's worth of link gains.
///
/// Draw order is `g0`, `h_1..h_N`, `g_1..g_N`, then the off-diagonal
/// inter-relay links row by row. The inter-relay links are drawn even when
/// `isolated` is set and then discarded, so a connected and an isolated run
/// on the same stream see identical `g0`, `h` and `g` and consume the same
/// amount of randomness.
pub fn draw_realization<R: Rng + ?Sized>(
    n_relays: usize,
    isolated: bool,
    rng: &mut R,
) -> ChannelRealization {
    let g0 = complex_gaussian(rng);
    let h: Vec<_> = (0..n_relays).map(|_| complex_gaussian(rng)).collect();
    let g: Vec<_> = (0..n_relays).map(|_| complex_gaussian(rng)).collect();
    let zero = ComplexGain::new(0.0, 0.0);
    let mut f = vec![zero; n_relays * n_relays];
    for k in 0..n_relays {
        for i in 0..n_relays {
            if k == i {
                continue;
            }
            let v = complex_gaussian(rng);
            if !isolated {
                f[k * n_relays + i] = v;
            }
        }
    }
    ChannelRealization { g0, h, g, f }
}

pub fn snr_db_to_linear(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

pub fn snr_linear_to_db(rho: f64) -> f64 {
    10.0 * rho.log10()
}
