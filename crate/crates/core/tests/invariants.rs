use std::sync::{Arc, OnceLock};

use gabkron::gabcodes::GabidulinCode;
use gabkron::gabkron::codec::{
    ciphertext_from_bytes, ciphertext_to_bytes, decode_message, encode_message, message_capacity, pk_from_bytes,
    pk_to_bytes, sk_from_bytes, sk_to_bytes,
};
use gabkron::gabkron::{decrypt, encrypt, field_for, keygen, sample_rank_error, setup_named, KeyPair};
use gabkron::gf2m::FieldCtx;
use gabkron::ranklinalg::RankVector;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

fn toy_keys(name: &'static str) -> &'static KeyPair {
    static IMPROVED: OnceLock<KeyPair> = OnceLock::new();
    static REPAIRED: OnceLock<KeyPair> = OnceLock::new();
    let cell = if name == "toy-improved" { &IMPROVED } else { &REPAIRED };
    cell.get_or_init(|| {
        let p = setup_named(name).unwrap();
        keygen(&p, &mut SplitMix64::seed_from_u64(11)).unwrap()
    })
}

fn gab_code(m: usize, n: usize, k: usize, seed: u64) -> GabidulinCode {
    let ctx = Arc::new(FieldCtx::standard(m).unwrap());
    let mut rng = SplitMix64::seed_from_u64(seed);
    loop {
        if let Ok(c) = GabidulinCode::new(RankVector::random(ctx.clone(), n, &mut rng), k) {
            return c;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gabidulin_corrects_up_to_radius(seed in any::<u64>(), which in 0usize..3) {
        let (m, n, k) = [(8, 8, 2), (10, 7, 3), (12, 12, 4)][which];
        let code = gab_code(m, n, k, seed);
        let ctx = code.ctx().clone();
        let mut rng = SplitMix64::seed_from_u64(seed ^ 0x5eed);
        let u = RankVector::random(ctx.clone(), k, &mut rng);
        let c = code.encode(&u).unwrap();
        let t = (seed as usize) % (code.radius() + 1);
        let e = sample_rank_error(&ctx, n, t, &mut rng).unwrap();
        prop_assert_eq!(e.rank_weight(), t);
        let (got, _) = code.decode(&c.add(&e).unwrap()).unwrap();
        prop_assert_eq!(got, u);
    }

    #[test]
    fn message_packing_round_trips(data in proptest::collection::vec(any::<u8>(), 0..64)) {
        let p = setup_named("toy-improved").unwrap();
        let ctx = field_for(&p).unwrap();
        let data = &data[..data.len().min(message_capacity(&p))];
        let m = encode_message(&p, &ctx, data).unwrap();
        prop_assert_eq!(decode_message(&p, &m).unwrap(), data.to_vec());
    }

    #[test]
    fn toy_schemes_round_trip(seed in any::<u64>(), repaired in any::<bool>(), data in proptest::collection::vec(any::<u8>(), 0..16)) {
        let kp = toy_keys(if repaired { "toy-repaired" } else { "toy-improved" });
        let p = &kp.pk.params;
        let ctx = field_for(p).unwrap();
        let data = &data[..data.len().min(message_capacity(p))];
        let m = encode_message(p, &ctx, data).unwrap();
        let c = encrypt(&kp.pk, &m, &mut SplitMix64::seed_from_u64(seed)).unwrap();
        let bytes = ciphertext_to_bytes(p, &c);
        let (p2, c2) = ciphertext_from_bytes(&bytes).unwrap();
        prop_assert_eq!(&c2, &c);
        prop_assert_eq!(decode_message(&p2, &decrypt(&kp.sk, &c2).unwrap()).unwrap(), data.to_vec());
    }
}

#[test]
fn key_serialization_round_trips() {
    for name in ["toy-improved", "toy-repaired"] {
        let kp = toy_keys(name);
        assert_eq!(pk_from_bytes(&pk_to_bytes(&kp.pk)).unwrap(), kp.pk);
        assert_eq!(sk_from_bytes(&sk_to_bytes(&kp.sk)).unwrap(), kp.sk);
    }
}
