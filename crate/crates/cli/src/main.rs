//! `gabkron` command-line tool: key generation, encryption, decryption,
//! parameter auditing and key-size reporting.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gabkron::audit::{
    demonstrate_original_flaw, display_kilo, feasibility, key_sizes, reproduce_tables, verify_structure_lemmas,
    Format, SizeFormula, SizeReport, ToText,
};
use gabkron::gabkron::codec::{
    ciphertext_from_bytes, ciphertext_to_bytes, decode_message, encode_message, message_capacity, pk_from_bytes,
    pk_to_bytes, sk_from_bytes, sk_to_bytes,
};
use gabkron::gabkron::{decrypt, encrypt, field_for, keygen, registry, setup_named, ParamSet, SchemeError};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::json;

const EXIT_PARAMS: u8 = 2;
const EXIT_DECODE: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_AUDIT: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "gabkron", version, about = "GabKron rank-metric encryption and parameter auditor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key pair and write it in GKPC format.
    Keygen {
        #[arg(long = "set")]
        set: String,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Encrypt a byte message under a public key.
    Encrypt {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Decrypt a ciphertext with a secret key.
    Decrypt {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce published tables and run the structural checks.
    Audit {
        /// Tables, feasibility, circulant-scrambler demonstration and lemma suites.
        #[arg(long)]
        all: bool,
        /// Circulant-scrambler demonstration on the original key generation.
        #[arg(long)]
        prop1: bool,
        /// Randomized structure lemma suites.
        #[arg(long)]
        lemmas: bool,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Key sizes for one or all registered parameter sets.
    Sizes {
        #[arg(long = "set")]
        set: Option<String>,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
}

#[derive(Args, Debug)]
struct SeedArg {
    /// 32 bytes as 64 hex characters; OS entropy when absent.
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Text => Format::Text,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

impl From<SchemeError> for Failure {
    fn from(e: SchemeError) -> Self {
        let code = match &e {
            SchemeError::Params(_) => EXIT_PARAMS,
            SchemeError::Decrypt(_) => EXIT_DECODE,
            SchemeError::Malformed(_) | SchemeError::Length { .. } => EXIT_IO,
            _ => 1,
        };
        fail(code, e.to_string())
    }
}

impl SeedArg {
    fn rng(&self) -> Result<ChaCha20Rng, Failure> {
        match &self.seed {
            None => Ok(ChaCha20Rng::from_entropy()),
            Some(s) => {
                let bytes = hex::decode(s.trim()).map_err(|e| fail(EXIT_IO, format!("--seed: {e}")))?;
                let seed: [u8; 32] = bytes
                    .try_into()
                    .map_err(|b: Vec<u8>| fail(EXIT_IO, format!("--seed must be 32 bytes, got {}", b.len())))?;
                Ok(ChaCha20Rng::from_seed(seed))
            }
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, data: &[u8]) -> Result<(), Failure> {
    fs::write(path, data).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn size_formula_for(name: &str, p_variant: gabkron::gabkron::Variant, supported: bool) -> SizeFormula {
    if !supported && name.ends_with("-original") {
        SizeFormula::ClaimedOriginal
    } else {
        SizeFormula::for_variant(p_variant)
    }
}

fn size_line(name: &str, r: &SizeReport) -> String {
    let sk = r.sk_bytes_f64().map_or("n/a".to_string(), |b| b.to_string());
    format!(
        "set={name} formula={} pk_bytes={} pk_display={} sk_bytes={sk}",
        r.formula_id,
        r.pk_bytes_f64(),
        display_kilo(r.pk_bytes_f64())
    )
}

fn cmd_keygen(set: &str, seed: &SeedArg, pk: &Path, sk: &Path, format: OutFormat) -> Result<(), Failure> {
    let p = setup_named(set).map_err(SchemeError::from)?;
    let mut rng = seed.rng()?;
    let kp = keygen(&p, &mut rng)?;
    let pk_bytes = pk_to_bytes(&kp.pk);
    let sk_bytes = sk_to_bytes(&kp.sk);
    write(pk, &pk_bytes)?;
    write(sk, &sk_bytes)?;
    let report = key_sizes(&p.raw(), SizeFormula::for_variant(p.variant));
    match format {
        OutFormat::Text => println!(
            "{} pk_file_bytes={} sk_file_bytes={}",
            size_line(&p.name, &report),
            pk_bytes.len(),
            sk_bytes.len()
        ),
        OutFormat::Json => println!(
            "{}",
            json!({
                "set": p.name,
                "size": report,
                "pk_file_bytes": pk_bytes.len(),
                "sk_file_bytes": sk_bytes.len(),
            })
        ),
    }
    Ok(())
}

fn cmd_encrypt(pk: &Path, input: &Path, out: &Path, seed: &SeedArg) -> Result<(), Failure> {
    let pk = pk_from_bytes(&read(pk)?)?;
    let data = read(input)?;
    let p: &ParamSet = &pk.params;
    if data.len() > message_capacity(p) {
        return Err(fail(
            EXIT_IO,
            format!("message has {} bytes, capacity is {}", data.len(), message_capacity(p)),
        ));
    }
    let ctx = field_for(p)?;
    let m = encode_message(p, &ctx, &data)?;
    let c = encrypt(&pk, &m, &mut seed.rng()?)?;
    write(out, &ciphertext_to_bytes(p, &c))
}

fn cmd_decrypt(sk: &Path, input: &Path, out: &Path) -> Result<(), Failure> {
    let sk = sk_from_bytes(&read(sk)?)?;
    let (p, c) = ciphertext_from_bytes(&read(input)?)?;
    if p.raw() != sk.params().raw() {
        return Err(fail(EXIT_IO, "ciphertext parameters do not match the secret key"));
    }
    let m = decrypt(&sk, &c)?;
    write(out, &decode_message(&p, &m)?)
}

fn cmd_audit(all: bool, prop1: bool, lemmas: bool, trials: usize, seed: &SeedArg, format: OutFormat) -> Result<(), Failure> {
    let all = all || !(prop1 || lemmas);
    let base = seed.rng()?.next_u64();
    let mut problems = Vec::new();
    let mut text = String::new();
    let mut doc = serde_json::Map::new();

    if all {
        let tables = reproduce_tables();
        problems.extend(tables.mismatches().iter().map(|r| format!("{} {} {}", r.table, r.set, r.quantity)));
        text += &tables.to_text();
        doc.insert("tables".into(), json!(tables));
        let mut feas = Vec::new();
        for s in registry() {
            let f = feasibility(s.name, &s.raw);
            if f.feasible != s.supported {
                problems.push(format!("feasibility verdict for {}", s.name));
            }
            text += &f.to_text();
            feas.push(f);
        }
        doc.insert("feasibility".into(), json!(feas));
    }
    if all || prop1 {
        let p = setup_named("toy-repaired").map_err(SchemeError::from)?;
        let r = demonstrate_original_flaw(&p, base, trials)?;
        if r.circulant_s_found != 0 {
            problems.push(format!("circulant S found in {} of {} trials", r.circulant_s_found, r.trials));
        }
        text += &r.to_text();
        doc.insert("prop1".into(), json!(r));
    }
    if all || lemmas {
        let r = verify_structure_lemmas(base, trials);
        if !r.all_pass() {
            problems.push("structure lemma failures".into());
        }
        text += &r.to_text();
        doc.insert("lemmas".into(), json!(r));
    }
    doc.insert("discrepancies".into(), json!(problems));
    match format {
        OutFormat::Text => {
            print!("{text}");
            println!("discrepancies={}", problems.len());
        }
        OutFormat::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("serializable")),
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(fail(EXIT_AUDIT, format!("audit mismatch: {}", problems.join("; "))))
    }
}

fn cmd_sizes(set: Option<&str>, format: OutFormat) -> Result<(), Failure> {
    let sets: Vec<_> = match set {
        Some(name) => vec![gabkron::gabkron::lookup(name)
            .ok_or_else(|| fail(EXIT_PARAMS, format!("unknown parameter set `{name}`")))?],
        None => registry(),
    };
    let reports: Vec<(&str, SizeReport)> = sets
        .iter()
        .map(|s| (s.name, key_sizes(&s.raw, size_formula_for(s.name, s.raw.variant, s.supported))))
        .collect();
    match format {
        OutFormat::Text => reports.iter().for_each(|(n, r)| println!("{}", size_line(n, r))),
        OutFormat::Json => {
            let v: Vec<_> = reports.iter().map(|(n, r)| json!({ "set": n, "size": r })).collect();
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Keygen { set, seed, pk, sk, format } => cmd_keygen(&set, &seed, &pk, &sk, format),
        Command::Encrypt { pk, input, out, seed } => cmd_encrypt(&pk, &input, &out, &seed),
        Command::Decrypt { sk, input, out } => cmd_decrypt(&sk, &input, &out),
        Command::Audit { all, prop1, lemmas, trials, seed, format } => cmd_audit(all, prop1, lemmas, trials, &seed, format),
        Command::Sizes { set, format } => cmd_sizes(set.as_deref(), format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
