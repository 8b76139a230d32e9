//! Versioned little-endian binary model format.
//!
//! Layout: magic `ETGM`, u32 version, u64 feature dim, u32 template count
//! and length-prefixed template names, f64 lambda, u32 head count and one
//! byte per head code, u32 tag count and length-prefixed tag strings, then
//! every head's weights as f64 in head order.

use std::io::{Read, Write};
use std::path::Path;

use super::features::{FeatureEncoder, Template};
use super::model::{Head, MultiHeadModel};
use crate::error::{Error, Result};
use crate::types::{EditTag, TagSet};

const MAGIC: &[u8; 4] = b"ETGM";
pub const FORMAT_VERSION: u32 = 1;

fn put_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u32).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

pub fn to_bytes(model: &MultiHeadModel) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + model.parameter_count() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(model.encoder.dim() as u64).to_le_bytes());
    let templates = model.encoder.templates();
    out.extend_from_slice(&(templates.len() as u32).to_le_bytes());
    for t in templates {
        put_str(&mut out, &t.name());
    }
    out.extend_from_slice(&model.lambda.to_le_bytes());
    out.extend_from_slice(&(model.heads.len() as u32).to_le_bytes());
    out.extend(model.heads.iter().map(|h| h.code()));
    out.extend_from_slice(&(model.tagset.len() as u32).to_le_bytes());
    for tag in model.tagset.tags() {
        put_str(&mut out, &tag.to_string());
    }
    for w in &model.weights {
        for v in w {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Model(format!("truncated model at byte {}", self.pos)));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
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

    fn string(&mut self) -> Result<&'a str> {
        let n = self.u32()? as usize;
        let at = self.pos;
        std::str::from_utf8(self.take(n)?).map_err(|_| Error::Model(format!("invalid UTF-8 at byte {at}")))
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<MultiHeadModel> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Model("not a model file".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::Model(format!("unsupported model version {version}")));
    }
    let dim = usize::try_from(r.u64()?).map_err(|_| Error::Model("feature dimension too large".into()))?;
    let n_templates = r.u32()? as usize;
    let mut templates = Vec::with_capacity(n_templates.min(64));
    for _ in 0..n_templates {
        let name = r.string()?;
        templates.push(Template::parse(name).ok_or_else(|| Error::Model(format!("unknown template {name:?}")))?);
    }
    let encoder = FeatureEncoder::new(dim, templates)?;
    let lambda = r.f64()?;
    let n_heads = r.u32()? as usize;
    let heads = r
        .take(n_heads)?
        .iter()
        .map(|&c| Head::from_code(c).ok_or_else(|| Error::Model(format!("unknown head code {c}"))))
        .collect::<Result<Vec<_>>>()?;
    let n_tags = r.u32()? as usize;
    let mut tags = Vec::with_capacity(n_tags.min(1 << 16));
    for _ in 0..n_tags {
        let s = r.string()?;
        tags.push(
            s.parse::<EditTag>()
                .map_err(|e| Error::Model(format!("bad tag {s:?}: {}", e.reason)))?,
        );
    }
    let tagset = TagSet::from_tags(tags)?;
    let mut model = MultiHeadModel::new(encoder, tagset, heads, lambda)?;
    let expected: usize = model.weights.iter().map(Vec::len).sum();
    if bytes.len() - r.pos != expected * 8 {
        return Err(Error::Model(format!(
            "expected {} weight bytes, found {}",
            expected * 8,
            bytes.len() - r.pos
        )));
    }
    for w in &mut model.weights {
        for v in w.iter_mut() {
            *v = r.f64()?;
        }
    }
    Ok(model)
}

pub fn save(model: &MultiHeadModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&to_bytes(model)).map_err(|e| Error::io(path, e))
}

pub fn load(path: impl AsRef<Path>) -> Result<MultiHeadModel> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    from_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tagger::features::DEFAULT_TEMPLATES;
    use crate::tagger::model::head_set;

    fn model() -> MultiHeadModel {
        let tagset = TagSet::parse("$KEEP\n$DELETE\n$APPEND_the\n$TRANSFORM_VERB_VB_VBD\n$UNKNOWN\n").unwrap();
        let enc = FeatureEncoder::new(32, DEFAULT_TEMPLATES.to_vec()).unwrap();
        let mut m = MultiHeadModel::new(enc, tagset, head_set(5).unwrap(), 0.25).unwrap();
        m.randomize(9, 1.0);
        m
    }

    #[test]
    fn roundtrip_is_byte_stable() {
        let m = model();
        let bytes = to_bytes(&m);
        let back = from_bytes(&bytes).unwrap();
        assert_eq!(back, m);
        assert_eq!(to_bytes(&back), bytes);
    }

    #[test]
    fn rejects_damage() {
        let bytes = to_bytes(&model());
        assert!(from_bytes(&bytes[..bytes.len() - 1]).is_err());
        assert!(from_bytes(&bytes[..10]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(from_bytes(&bad).is_err());
        let mut bad = bytes;
        bad[4] = 2;
        assert!(from_bytes(&bad).is_err());
    }
}
