//! Seeded test-pattern generators. Pattern `index` under a given seed is
//! drawn from its own ChaCha stream, so results do not depend on how the
//! indices are split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{verticalize, IjkContext, Pattern2D};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Hierarchy, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// A window of a vertically aligned concatenation of level-k words.
    Structured,
    /// A structured window with 1 to 8 cells changed.
    Corrupted,
    /// Independent uniform cells over Ã.
    Uniform,
    /// Side-ℓ'_k tiles, each a vertically aligned word of L̃'_k.
    Mosaic,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::Structured,
        GeneratorKind::Corrupted,
        GeneratorKind::Uniform,
        GeneratorKind::Mosaic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Structured => "structured",
            GeneratorKind::Corrupted => "corrupted",
            GeneratorKind::Uniform => "uniform",
            GeneratorKind::Mosaic => "mosaic",
        }
    }

    fn stream_tag(self) -> u64 {
        match self {
            GeneratorKind::Structured => 0,
            GeneratorKind::Corrupted => 1,
            GeneratorKind::Uniform => 2,
            GeneratorKind::Mosaic => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PatternGenerator {
    pub side: usize,
    pub seed: u64,
    level_words: Vec<Vec<Symbol>>,
    tile_words: Vec<Vec<Symbol>>,
    ell: usize,
    ell_prime: usize,
}

impl PatternGenerator {
    /// Generator for square patterns of side `side` at level k.
    pub fn new(h: &Hierarchy, ctx: &IjkContext, side: usize, seed: u64, cap: usize) -> Result<Self> {
        if side == 0 {
            return Err(Error::invalid("pattern side must be positive"));
        }
        let lw = h.words(ctx.k)?;
        let level_words = lw
            .named()
            .iter()
            .map(|(_, w)| w.materialize_all(cap))
            .collect::<Result<Vec<_>>>()?;
        let ell = level_words[0].len();
        if side.saturating_mul(side) > cap {
            return Err(Error::capacity("pattern cells", side * side, cap));
        }
        let tile_words = ctx
            .a_names
            .iter()
            .chain(&ctx.b_names)
            .map(|(_, w)| w.clone())
            .collect();
        Ok(PatternGenerator {
            side,
            seed,
            level_words,
            tile_words,
            ell,
            ell_prime: ctx.ell_prime,
        })
    }

    /// The default side 2ℓ'_k + 1 + margin.
    pub fn default_side(ctx: &IjkContext, margin: usize) -> usize {
        2 * ctx.ell_prime + 1 + margin
    }

    fn rng(&self, kind: GeneratorKind, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index.wrapping_mul(4).wrapping_add(kind.stream_tag()));
        rng
    }

    pub fn generate(&self, kind: GeneratorKind, index: u64) -> Pattern2D {
        let mut rng = self.rng(kind, index);
        match kind {
            GeneratorKind::Structured => self.structured(&mut rng),
            GeneratorKind::Corrupted => {
                let mut p = self.structured(&mut rng);
                let flips = rng.gen_range(1..=8);
                for _ in 0..flips {
                    let i = rng.gen_range(1..=self.side);
                    let j = rng.gen_range(1..=self.side);
                    let old = p.get(i, j);
                    let new = (old + rng.gen_range(1..=2)) % 3;
                    p.set(i, j, new);
                }
                p
            }
            GeneratorKind::Uniform => {
                let cells = (0..self.side * self.side).map(|_| rng.gen_range(0..3u8)).collect();
                Pattern2D::new(Alphabet::Tilde, self.side, self.side, cells).expect("valid cells")
            }
            GeneratorKind::Mosaic => self.mosaic(&mut rng),
        }
    }

    fn structured(&self, rng: &mut ChaCha8Rng) -> Pattern2D {
        let offset = rng.gen_range(0..self.ell);
        let mut row = Vec::with_capacity(self.side + 2 * self.ell);
        while row.len() < offset + self.side {
            let w = &self.level_words[rng.gen_range(0..self.level_words.len())];
            row.extend_from_slice(w);
        }
        verticalize(&row[offset..offset + self.side], self.side).expect("nonempty row")
    }

    fn mosaic(&self, rng: &mut ChaCha8Rng) -> Pattern2D {
        let lp = self.ell_prime;
        let (ox, oy) = (rng.gen_range(0..lp), rng.gen_range(0..lp));
        let tiles = (self.side + 2 * lp - 1) / lp;
        let choice: Vec<usize> = (0..tiles * tiles)
            .map(|_| rng.gen_range(0..self.tile_words.len()))
            .collect();
        let mut cells = Vec::with_capacity(self.side * self.side);
        for j in 0..self.side {
            let ty = (j + oy) / lp;
            for i in 0..self.side {
                let (tx, r) = ((i + ox) / lp, (i + ox) % lp);
                cells.push(self.tile_words[choice[ty * tiles + tx]][r]);
            }
        }
        Pattern2D::new(Alphabet::Tilde, self.side, self.side, cells).expect("valid cells")
    }
}

/// A `tiles × tiles` arrangement of square blocks, each a vertically aligned
/// copy of one of `blocks` chosen from stream `index` of `seed`. All blocks
/// must share one length.
pub fn random_tiling(blocks: &[Vec<Symbol>], tiles: usize, seed: u64, index: u64) -> Result<Pattern2D> {
    let side = blocks.first().map(Vec::len).unwrap_or(0);
    if side == 0 || tiles == 0 || blocks.iter().any(|b| b.len() != side) {
        return Err(Error::invalid("tiling needs nonempty blocks of equal length"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let choice: Vec<usize> = (0..tiles * tiles).map(|_| rng.gen_range(0..blocks.len())).collect();
    let n = side * tiles;
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(blocks[choice[(j / side) * tiles + i / side]][i % side]);
        }
    }
    Pattern2D::new(Alphabet::Tilde, n, n, cells)
}
