use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disjoint cover of `{0, …, count − 1}` by non-empty blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    count: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(count: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; count];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= count {
                    return Err(Error::InvalidPartition(format!("index {i} out of range for {count} vectors")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("index {i} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {missing} is not covered")));
        }
        Ok(Self { count, blocks })
    }

    /// Contiguous blocks of `size` (the last may be shorter).
    pub fn contiguous(count: usize, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidPartition("block size must be positive".into()));
        }
        let idx: Vec<usize> = (0..count).collect();
        Self::new(count, idx.chunks(size).map(<[usize]>::to_vec).collect())
    }

    pub fn singletons(count: usize) -> Self {
        Self {
            count,
            blocks: (0..count).map(|i| vec![i]).collect(),
        }
    }

    /// Parses `"0,1,2;3,4"` against `count` vectors.
    pub fn parse(spec: &str, count: usize) -> Result<Self> {
        let blocks: BlockSpec = spec.parse()?;
        Self::new(count, blocks.0)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> Result<&[usize]> {
        self.blocks.get(j).map(Vec::as_slice).ok_or(Error::UnknownBlock(j))
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn check_cap(&self, cap: usize) -> Result<()> {
        match self.blocks.iter().map(Vec::len).find(|&n| n > cap) {
            Some(size) => Err(Error::BlockTooLarge { size, cap }),
            None => Ok(()),
        }
    }

    pub fn is_equi_sized(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0].len() == w[1].len())
    }
}

/// Raw `;`-separated list of `,`-separated index blocks, not yet checked
/// against a vector count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec(pub Vec<Vec<usize>>);

impl FromStr for BlockSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let block = part
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidPartition(format!("bad index {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        if blocks.is_empty() {
            return Err(Error::InvalidPartition("no blocks given".into()));
        }
        Ok(Self(blocks))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&s.join(";"))
    }
}
