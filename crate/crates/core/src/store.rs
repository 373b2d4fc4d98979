//! On-disk store for truncated values, so long convergence runs can be
//! resumed.
//!
//! Layout (little endian): the magic `MZVSTORE`, a `u32` version, a `u64`
//! entry count, then per entry: `u8` star flag, `u32` index length, the
//! `u32` entries, `u64` m, and numerator and denominator each as a `u32`
//! byte count followed by two's-complement bytes.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_bigint::BigInt;

use crate::{Index, MzvError, Rational, Result};

const MAGIC: &[u8; 8] = b"MZVSTORE";
const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    star: bool,
    index: Vec<u32>,
    m: u64,
}

#[derive(Clone, Debug, Default)]
pub struct ZetaStore {
    values: HashMap<Key, Rational>,
}

impl ZetaStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Load `path`, or start empty if it does not exist.
    pub fn open(path: &Path) -> Result<Self> {
        match File::open(path) {
            Ok(f) => Self::read_from(&mut BufReader::new(f)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: &Index, star: bool, m: u64) -> Option<&Rational> {
        self.values.get(&Key { star, index: k.entries().to_vec(), m })
    }

    pub fn insert(&mut self, k: &Index, star: bool, m: u64, value: Rational) {
        self.values.insert(Key { star, index: k.entries().to_vec(), m }, value);
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.values.len() as u64).to_le_bytes())?;
        // sorted so identical stores produce identical files
        let mut entries: Vec<(&Key, &Rational)> = self.values.iter().collect();
        entries.sort_by(|a, b| (a.0.star, &a.0.index, a.0.m).cmp(&(b.0.star, &b.0.index, b.0.m)));
        for (key, value) in entries {
            w.write_all(&[u8::from(key.star)])?;
            w.write_all(&(key.index.len() as u32).to_le_bytes())?;
            for k in &key.index {
                w.write_all(&k.to_le_bytes())?;
            }
            w.write_all(&key.m.to_le_bytes())?;
            for part in [value.numer(), value.denom()] {
                let bytes = part.to_signed_bytes_le();
                w.write_all(&(bytes.len() as u32).to_le_bytes())?;
                w.write_all(&bytes)?;
            }
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let corrupt = |what: &str| MzvError::Parse(format!("store file: {what}"));
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(corrupt("bad magic"));
        }
        if read_u32(r)? != VERSION {
            return Err(corrupt("unsupported version"));
        }
        let count = read_u64(r)?;
        let mut values = HashMap::new();
        for _ in 0..count {
            let mut flag = [0u8; 1];
            r.read_exact(&mut flag)?;
            let len = read_u32(r)? as usize;
            let index = (0..len).map(|_| read_u32(r)).collect::<Result<Vec<u32>>>()?;
            if index.contains(&0) {
                return Err(corrupt("zero index entry"));
            }
            let m = read_u64(r)?;
            let mut parts = Vec::with_capacity(2);
            for _ in 0..2 {
                let n = read_u32(r)? as usize;
                let mut buf = vec![0u8; n];
                r.read_exact(&mut buf)?;
                parts.push(BigInt::from_signed_bytes_le(&buf));
            }
            let denom = parts.pop().expect("two parts");
            let numer = parts.pop().expect("two parts");
            if denom == BigInt::from(0) {
                return Err(corrupt("zero denominator"));
            }
            values.insert(Key { star: flag[0] != 0, index, m }, Rational::new(numer, denom));
        }
        Ok(ZetaStore { values })
    }
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::zeta_star_trunc;
    use proptest::prelude::*;

    #[test]
    fn missing_file_is_empty() {
        let dir = std::env::temp_dir().join("mzv-store-missing-does-not-exist.bin");
        assert!(ZetaStore::open(&dir).unwrap().is_empty());
    }

    #[test]
    fn rejects_garbage() {
        let mut bytes: &[u8] = b"NOTASTORE-------";
        assert!(ZetaStore::read_from(&mut bytes).is_err());
    }

    #[test]
    fn file_round_trip() {
        let path = std::env::temp_dir().join(format!("mzv-store-{}.bin", std::process::id()));
        let mut store = ZetaStore::new();
        let k: Index = "3,1".parse().unwrap();
        store.insert(&k, true, 40, zeta_star_trunc(&k, 40));
        store.save(&path).unwrap();
        let back = ZetaStore::open(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(back.get(&k, true, 40), Some(&zeta_star_trunc(&k, 40)));
        assert_eq!(back.get(&k, false, 40), None);
    }

    proptest! {
        #[test]
        fn bytes_round_trip(
            entries in proptest::collection::vec(
                (any::<bool>(), proptest::collection::vec(1u32..9, 0..5), 0u64..1000, any::<i64>(), 1i64..i64::MAX),
                0..8,
            )
        ) {
            let mut store = ZetaStore::new();
            for (star, ix, m, n, d) in entries {
                store.insert(&Index::new(ix).unwrap(), star, m, Rational::new(n.into(), d.into()));
            }
            let mut buf = Vec::new();
            store.write_to(&mut buf).unwrap();
            let back = ZetaStore::read_from(&mut buf.as_slice()).unwrap();
            prop_assert_eq!(back.values, store.values);
        }
    }
}
