//! Binary model checkpoints.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! magic      8 bytes  "TPLSTMCK"
//! version    u32      1
//! input      u64
//! hidden     u64
//! rng_seed   u64
//! config     u32 length + JSON-encoded TrainConfig
//! tensors    f64 × (4h·d + 4h·h + 4h + h + 1), in w_input, w_hidden,
//!            bias, head_w, head_b order
//! ```

use std::fs;
use std::path::Path;

use super::model::LstmModel;
use super::train::TrainConfig;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"TPLSTMCK";
const VERSION: u32 = 1;

pub fn encode(model: &LstmModel, cfg: &TrainConfig) -> Result<Vec<u8>> {
    let config = serde_json::to_vec(cfg)?;
    let mut buf = Vec::with_capacity(64 + config.len() + 8 * model.param_count());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(model.input_size as u64).to_le_bytes());
    buf.extend_from_slice(&(model.hidden_size as u64).to_le_bytes());
    buf.extend_from_slice(&model.rng_seed.to_le_bytes());
    buf.extend_from_slice(&(config.len() as u32).to_le_bytes());
    buf.extend_from_slice(&config);
    for (_, tensor) in model.tensors() {
        for v in tensor {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(buf)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Checkpoint("truncated checkpoint".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn decode(bytes: &[u8]) -> Result<(LstmModel, TrainConfig)> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(8)? != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::Checkpoint(format!("unsupported version {version}")));
    }
    let input = r.u64()? as usize;
    let hidden = r.u64()? as usize;
    let rng_seed = r.u64()?;
    let config_len = r.u32()? as usize;
    let cfg: TrainConfig = serde_json::from_slice(r.take(config_len)?)?;
    let mut model = LstmModel::zeros(input, hidden);
    model.rng_seed = rng_seed;
    for (_, tensor) in model.tensors_mut() {
        for v in tensor.iter_mut() {
            *v = r.f64()?;
        }
    }
    if r.pos != bytes.len() {
        return Err(Error::Checkpoint("trailing bytes".into()));
    }
    Ok((model, cfg))
}

pub fn save(model: &LstmModel, cfg: &TrainConfig, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(model, cfg)?).map_err(|e| Error::io(path, e))
}

pub fn load(path: impl AsRef<Path>) -> Result<(LstmModel, TrainConfig)> {
    let path = path.as_ref();
    decode(&fs::read(path).map_err(|e| Error::io(path, e))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuralnet::model::{init_model, Dense};

    #[test]
    fn round_trip_is_bit_exact() {
        let model = init_model(17, 3, 5).unwrap();
        let cfg = TrainConfig { learning_rate: 0.3, ..TrainConfig::default() };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.ckpt");
        save(&model, &cfg, &path).unwrap();
        let (back, back_cfg) = load(&path).unwrap();
        assert_eq!(back, model);
        assert_eq!(back_cfg, cfg);
        let x = Dense { dimension: 3, rows: vec![0.1, 0.2, 0.3, -0.5, 0.0, 1.0] };
        assert_eq!(
            model.forward(&x).unwrap().to_bits(),
            back.forward(&x).unwrap().to_bits()
        );
    }

    #[test]
    fn rejects_corruption() {
        let model = init_model(1, 2, 2).unwrap();
        let bytes = encode(&model, &TrainConfig::default()).unwrap();
        assert!(decode(&bytes[..bytes.len() - 3]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode(&bad).is_err());
        let mut bad = bytes;
        bad[8] = 9;
        assert!(decode(&bad).is_err());
    }
}
