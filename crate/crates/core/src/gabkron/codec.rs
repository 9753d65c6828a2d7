//! GKPC file format: `"GKPC" | version | variant tag | 13 x u32 BE | payload`.
//!
//! Public-key payloads pack each field element into exactly m bits. Secret keys
//! and ciphertexts store each element in `ceil(m/8)` little-endian bytes.

use std::sync::Arc;

use super::params::{setup, ParamSet, RawParams, Variant};
use super::scheme::{field_for, PublicKey, SecretKey};
use super::SchemeError;
use crate::gf2m::{FieldCtx, FieldElement};
use crate::ranklinalg::{
    block_first_rows, circulant_block_from_first_rows, is_circulant_block, partial_circulant_block_from_first_rows,
    RankMatrix, RankVector,
};

pub const MAGIC: &[u8; 4] = b"GKPC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 4 + 1 + 1 + 13 * 4;
const LEN_PREFIX: usize = 4;

fn malformed(msg: impl Into<String>) -> SchemeError {
    SchemeError::Malformed(msg.into())
}

pub fn write_header(p: &ParamSet, out: &mut Vec<u8>) {
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(p.variant.tag());
    for v in [p.q, p.m, p.n, p.k, p.n1, p.n2, p.k1, p.k2, p.t, p.t1, p.t2, p.lambda, p.lambda_prime] {
        out.extend_from_slice(&(v as u32).to_be_bytes());
    }
}

/// Parses and validates a header, returning the parameters and the payload.
pub fn read_header(bytes: &[u8]) -> Result<(ParamSet, &[u8]), SchemeError> {
    if bytes.len() < HEADER_LEN {
        return Err(malformed(format!("file has {} bytes, header needs {HEADER_LEN}", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(malformed("bad magic"));
    }
    if bytes[4] != VERSION {
        return Err(malformed(format!("unsupported version {}", bytes[4])));
    }
    let variant = Variant::from_tag(bytes[5]).ok_or_else(|| malformed(format!("unknown variant tag {}", bytes[5])))?;
    let f: Vec<usize> = bytes[6..HEADER_LEN]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes(c.try_into().expect("4 bytes")) as usize)
        .collect();
    let [q, m, n, k, n1, n2, k1, k2, t, t1, t2, lambda, lambda_prime] = f[..] else {
        unreachable!("13 fields");
    };
    if q != 2 {
        return Err(malformed(format!("q = {q}, only q = 2 is supported")));
    }
    let raw = RawParams {
        variant,
        m,
        n1,
        k1,
        n2,
        k2,
        t: Some(t),
        t1: Some(t1),
        lambda,
        lambda_prime: (variant == Variant::Improved).then_some(lambda_prime),
    };
    let p = setup(&raw)?;
    if (p.n, p.k, p.t2, p.lambda_prime) != (n, k, t2, lambda_prime) {
        return Err(malformed("derived header fields are inconsistent"));
    }
    Ok((p.with_registry_name(), &bytes[HEADER_LEN..]))
}

struct BitWriter {
    out: Vec<u8>,
    bit: usize,
}

impl BitWriter {
    fn new() -> Self {
        BitWriter { out: Vec::new(), bit: 0 }
    }

    fn push(&mut self, e: &FieldElement, m: usize) {
        for i in 0..m {
            if self.bit % 8 == 0 {
                self.out.push(0);
            }
            if e.bit(i) {
                *self.out.last_mut().expect("pushed") |= 1 << (self.bit % 8);
            }
            self.bit += 1;
        }
    }
}

fn packed_len(count: usize, m: usize) -> usize {
    (count * m).div_ceil(8)
}

fn unpack(bytes: &[u8], count: usize, m: usize) -> Result<Vec<FieldElement>, SchemeError> {
    if bytes.len() != packed_len(count, m) {
        return Err(malformed(format!("packed payload has {} bytes, expected {}", bytes.len(), packed_len(count, m))));
    }
    let bit = |pos: usize| bytes[pos / 8] >> (pos % 8) & 1 == 1;
    let used = count * m;
    if (used..bytes.len() * 8).any(bit) {
        return Err(malformed("nonzero padding bits"));
    }
    Ok((0..count)
        .map(|c| {
            let mut e = FieldElement::ZERO;
            for i in (0..m).filter(|&i| bit(c * m + i)) {
                e.words_mut()[i / 64] |= 1 << (i % 64);
            }
            e
        })
        .collect())
}

struct Reader<'a> {
    ctx: &'a FieldCtx,
    bytes: &'a [u8],
}

impl Reader<'_> {
    fn elements(&mut self, count: usize) -> Result<Vec<FieldElement>, SchemeError> {
        let w = self.ctx.byte_len();
        let need = count * w;
        if self.bytes.len() < need {
            return Err(malformed("payload truncated"));
        }
        let (head, rest) = self.bytes.split_at(need);
        self.bytes = rest;
        head.chunks_exact(w)
            .map(|c| self.ctx.from_bytes(c).map_err(|e| malformed(e.to_string())))
            .collect()
    }

    fn vector(&mut self, ctx: &Arc<FieldCtx>, n: usize) -> Result<RankVector, SchemeError> {
        Ok(RankVector::new(ctx.clone(), self.elements(n)?)?)
    }

    fn matrix(&mut self, ctx: &Arc<FieldCtx>, rows: usize, cols: usize) -> Result<RankMatrix, SchemeError> {
        let data = self.elements(rows * cols)?;
        Ok(RankMatrix::from_fn(ctx.clone(), rows, cols, |i, j| data[i * cols + j]))
    }

    fn finish(self) -> Result<(), SchemeError> {
        if self.bytes.is_empty() {
            Ok(())
        } else {
            Err(malformed(format!("{} trailing bytes", self.bytes.len())))
        }
    }
}

fn write_elements<'a>(ctx: &FieldCtx, elems: impl IntoIterator<Item = &'a FieldElement>, out: &mut Vec<u8>) {
    for e in elems {
        ctx.write_bytes(e, out);
    }
}

fn matrix_elements(m: &RankMatrix) -> impl Iterator<Item = &FieldElement> {
    (0..m.rows()).flat_map(move |i| m.row(i).iter())
}

/// Payload size of a public key in bytes.
pub fn pk_payload_len(p: &ParamSet) -> usize {
    match p.variant {
        Variant::Improved => packed_len(p.k1 * p.n1 * p.n2, p.m),
        Variant::Repaired => packed_len(p.k * (p.n - p.k), p.m),
    }
}

pub fn pk_to_bytes(pk: &PublicKey) -> Vec<u8> {
    let p = &pk.params;
    let mut out = Vec::with_capacity(HEADER_LEN + pk_payload_len(p));
    write_header(p, &mut out);
    let mut w = BitWriter::new();
    match p.variant {
        Variant::Improved => {
            for row in block_first_rows(&pk.g_pub, p.k2, p.n2) {
                row.entries().iter().for_each(|e| w.push(e, p.m));
            }
        }
        Variant::Repaired => {
            for i in 0..p.k {
                pk.g_pub.row(i)[p.k..].iter().for_each(|e| w.push(e, p.m));
            }
        }
    }
    out.extend(w.out);
    out
}

pub fn pk_from_bytes(bytes: &[u8]) -> Result<PublicKey, SchemeError> {
    let (p, payload) = read_header(bytes)?;
    let ctx = field_for(&p)?;
    let g_pub = match p.variant {
        Variant::Improved => {
            let elems = unpack(payload, p.k1 * p.n1 * p.n2, p.m)?;
            let rows: Vec<RankVector> = elems
                .chunks(p.n2)
                .map(|c| RankVector::new(ctx.clone(), c.to_vec()))
                .collect::<Result<_, _>>()?;
            partial_circulant_block_from_first_rows(ctx, p.k1, p.n1, p.k2, &rows)?
        }
        Variant::Repaired => {
            let r = p.n - p.k;
            let elems = unpack(payload, p.k * r, p.m)?;
            RankMatrix::from_fn(ctx, p.k, p.n, |i, j| match j < p.k {
                true if i == j => FieldElement::ONE,
                true => FieldElement::ZERO,
                false => elems[i * r + j - p.k],
            })
        }
    };
    Ok(PublicKey { params: p, g_pub })
}

pub fn sk_to_bytes(sk: &SecretKey) -> Vec<u8> {
    let p = sk.params();
    let mut out = Vec::new();
    write_header(p, &mut out);
    match sk {
        SecretKey::Improved { alpha, p: pm, g1, .. } => {
            let ctx = pm.ctx();
            ctx.write_bytes(alpha, &mut out);
            for row in block_first_rows(pm, p.n2, p.n2) {
                write_elements(ctx, row.entries(), &mut out);
            }
            write_elements(ctx, matrix_elements(g1), &mut out);
        }
        SecretKey::Repaired { alpha, g1, b, s, .. } => {
            let ctx = b.ctx();
            ctx.write_bytes(alpha, &mut out);
            write_elements(ctx, matrix_elements(g1), &mut out);
            write_elements(ctx, b.entries(), &mut out);
            write_elements(ctx, matrix_elements(s), &mut out);
        }
    }
    out
}

pub fn sk_from_bytes(bytes: &[u8]) -> Result<SecretKey, SchemeError> {
    let (p, payload) = read_header(bytes)?;
    let ctx = field_for(&p)?;
    let mut r = Reader { ctx: &ctx, bytes: payload };
    let alpha = r.elements(1)?[0];
    let sk = match p.variant {
        Variant::Improved => {
            let rows = (0..p.n1 * p.n1).map(|_| r.vector(&ctx, p.n2)).collect::<Result<Vec<_>, _>>()?;
            let pm = circulant_block_from_first_rows(ctx.clone(), p.n1, &rows)?;
            debug_assert!(is_circulant_block(&pm, p.n2));
            let g1 = r.matrix(&ctx, p.k1, p.n1)?;
            SecretKey::Improved { params: p, alpha, p: pm, g1 }
        }
        Variant::Repaired => {
            let g1 = r.matrix(&ctx, p.k1, p.n1)?;
            let b = r.vector(&ctx, p.n)?;
            let s = r.matrix(&ctx, p.k, p.k)?;
            SecretKey::Repaired { params: p, alpha, g1, b, s }
        }
    };
    r.finish()?;
    Ok(sk)
}

pub fn ciphertext_to_bytes(p: &ParamSet, c: &RankVector) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(p, &mut out);
    write_elements(c.ctx(), c.entries(), &mut out);
    out
}

pub fn ciphertext_from_bytes(bytes: &[u8]) -> Result<(ParamSet, RankVector), SchemeError> {
    let (p, payload) = read_header(bytes)?;
    let ctx = field_for(&p)?;
    let mut r = Reader { ctx: &ctx, bytes: payload };
    let c = r.vector(&ctx, p.n)?;
    r.finish()?;
    Ok((p, c))
}

/// Largest byte payload that fits in one message vector.
pub fn message_capacity(p: &ParamSet) -> usize {
    (p.k * p.m / 8).saturating_sub(LEN_PREFIX)
}

/// Packs `len (u32 BE) || data` into the k·m bits of a message vector.
pub fn encode_message(p: &ParamSet, ctx: &Arc<FieldCtx>, data: &[u8]) -> Result<RankVector, SchemeError> {
    let cap = message_capacity(p);
    if data.len() > cap {
        return Err(SchemeError::Length { what: "message bytes", got: data.len(), expected: cap });
    }
    let mut buf = (data.len() as u32).to_be_bytes().to_vec();
    buf.extend_from_slice(data);
    buf.resize(packed_len(p.k, p.m), 0);
    let elems = unpack(&buf, p.k, p.m)?;
    Ok(RankVector::new(ctx.clone(), elems)?)
}

pub fn decode_message(p: &ParamSet, m: &RankVector) -> Result<Vec<u8>, SchemeError> {
    if m.len() != p.k {
        return Err(SchemeError::Length { what: "message", got: m.len(), expected: p.k });
    }
    let mut w = BitWriter::new();
    m.entries().iter().for_each(|e| w.push(e, p.m));
    let buf = w.out;
    let len = u32::from_be_bytes(buf[..LEN_PREFIX].try_into().expect("k*m >= 32")) as usize;
    if len > message_capacity(p) {
        return Err(malformed(format!("message length header {len} exceeds capacity {}", message_capacity(p))));
    }
    Ok(buf[LEN_PREFIX..LEN_PREFIX + len].to_vec())
}

#[cfg(test)]
mod tests {
    use rand::{RngCore, SeedableRng};
    use rand_xoshiro::SplitMix64;

    use super::*;
    use crate::gabkron::params::setup_named;
    use crate::gabkron::scheme::keygen;

    #[test]
    fn header_length() {
        let p = setup_named("new-gabkron-128").unwrap();
        let mut out = Vec::new();
        write_header(&p, &mut out);
        assert_eq!(out.len(), HEADER_LEN);
        assert_eq!(HEADER_LEN, 58);
        assert_eq!(pk_payload_len(&p), 4050);
        let (q, rest) = read_header(&out).unwrap();
        assert_eq!(q, p);
        assert!(rest.is_empty());
    }

    #[test]
    fn key_round_trips() {
        for name in ["toy-improved", "toy-repaired"] {
            let p = setup_named(name).unwrap();
            for seed in 0..5 {
                let kp = keygen(&p, &mut SplitMix64::seed_from_u64(seed)).unwrap();
                let pkb = pk_to_bytes(&kp.pk);
                assert_eq!(pkb.len(), HEADER_LEN + pk_payload_len(&p));
                assert_eq!(pk_from_bytes(&pkb).unwrap(), kp.pk);
                let skb = sk_to_bytes(&kp.sk);
                assert_eq!(sk_from_bytes(&skb).unwrap(), kp.sk);
                assert!(sk_from_bytes(&pkb).is_err());
                assert!(pk_from_bytes(&pkb[..pkb.len() - 1]).is_err());
                assert!(sk_from_bytes(&skb[..skb.len() - 1]).is_err());
            }
        }
    }

    #[test]
    fn ciphertext_round_trip_and_truncation() {
        let p = setup_named("toy-improved").unwrap();
        let ctx = field_for(&p).unwrap();
        let mut rng = SplitMix64::seed_from_u64(1);
        let c = RankVector::random(ctx, p.n, &mut rng);
        let b = ciphertext_to_bytes(&p, &c);
        assert_eq!(ciphertext_from_bytes(&b).unwrap(), (p.clone(), c));
        assert!(ciphertext_from_bytes(&b[..b.len() - 1]).is_err());
        assert!(ciphertext_from_bytes(&b[..10]).is_err());
        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(ciphertext_from_bytes(&bad).is_err());
    }

    #[test]
    fn rejects_invalid_header_params() {
        let p = setup_named("toy-improved").unwrap();
        let mut out = Vec::new();
        write_header(&p, &mut out);
        // claim t = 3, violating the block budget
        out[6 + 8 * 4..6 + 9 * 4].copy_from_slice(&3u32.to_be_bytes());
        assert!(matches!(read_header(&out), Err(SchemeError::Params(_))));
    }

    #[test]
    fn message_packing() {
        for name in ["toy-improved", "new-gabkron-128", "rep-gabkron-128"] {
            let p = setup_named(name).unwrap();
            let ctx = field_for(&p).unwrap();
            let mut rng = SplitMix64::seed_from_u64(2);
            let cap = message_capacity(&p);
            for len in [0, 1, cap / 2, cap] {
                let mut data = vec![0u8; len];
                rng.fill_bytes(&mut data);
                let m = encode_message(&p, &ctx, &data).unwrap();
                assert_eq!(m.len(), p.k);
                assert_eq!(decode_message(&p, &m).unwrap(), data);
            }
            assert!(encode_message(&p, &ctx, &vec![0; cap + 1]).is_err());
        }
        assert_eq!(message_capacity(&setup_named("new-gabkron-128").unwrap()), 401);
    }
}
