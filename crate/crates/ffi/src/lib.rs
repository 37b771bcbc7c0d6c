//! C interface to amdlab.
//!
//! Objects are opaque handles created by `*_new`/`*_parse`/`*_run` and
//! released with the matching `*_free`. Fallible calls return an
//! [`AmdStatus`]; on failure a message is available from
//! [`amd_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use amdlab::experiment::presets::resolve;
use amdlab::experiment::{run_isolate, IsolateConfig};
use amdlab::game::{run_game, GameResult};
use amdlab::search::GameTemplate;
use amdlab::traders::StrategyKind;
use amdlab::MechanismGenome;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const AMD_STRATEGY_ZIC: u32 = 1;
pub const AMD_STRATEGY_ZIP: u32 = 2;
pub const AMD_STRATEGY_RE: u32 = 4;
pub const AMD_STRATEGY_GD: u32 = 8;
pub const AMD_STRATEGY_ALL: u32 = 15;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidConfig = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// A parsed mechanism genome.
pub struct AmdGenome(MechanismGenome);

/// A game under construction: markets, population and length.
pub struct AmdGameConfig {
    markets: Vec<MechanismGenome>,
    template: GameTemplate,
    seed: u64,
}

pub struct AmdGameResult(GameResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: AmdStatus, msg: impl Into<String>) -> AmdStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> AmdStatus) -> AmdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(AmdStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, AmdStatus> {
    if s.is_null() {
        return Err(fail(AmdStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(AmdStatus::InvalidUtf8, "string argument is not UTF-8"))
}

fn strategies(mask: u32) -> Result<Vec<StrategyKind>, AmdStatus> {
    let bits = [AMD_STRATEGY_ZIC, AMD_STRATEGY_ZIP, AMD_STRATEGY_RE, AMD_STRATEGY_GD];
    if mask == 0 || mask & !AMD_STRATEGY_ALL != 0 {
        return Err(fail(AmdStatus::InvalidConfig, format!("invalid strategy mask {mask}")));
    }
    Ok(StrategyKind::ALL.iter().zip(bits).filter(|(_, b)| mask & b != 0).map(|(k, _)| *k).collect())
}

/// Message describing the last failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn amd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a genome string or a preset name such as `CDA_l`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn amd_genome_parse(text: *const c_char, out: *mut *mut AmdGenome) -> AmdStatus {
    guard(|| {
        if out.is_null() {
            return fail(AmdStatus::NullPointer, "out is null");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match resolve(text) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(AmdGenome(g)));
                AmdStatus::Ok
            }
            Err(e) => fail(AmdStatus::ParseError, e.to_string()),
        }
    })
}

/// Canonical string of a genome; release it with [`amd_string_free`].
/// Returns null if `genome` is null.
///
/// # Safety
/// `genome` must be null or a live handle from [`amd_genome_parse`].
#[no_mangle]
pub unsafe extern "C" fn amd_genome_to_string(genome: *const AmdGenome) -> *mut c_char {
    match genome.as_ref() {
        Some(g) => CString::new(g.0.to_string()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `genome` must be null or a handle that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn amd_genome_free(genome: *mut AmdGenome) {
    if !genome.is_null() {
        drop(Box::from_raw(genome));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn amd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// New game with no markets and the default population (120 traders of all
/// four strategies, values in [50, 150]).
#[no_mangle]
pub extern "C" fn amd_game_config_new(num_days: u32, rounds_per_day: u32, seed: u64) -> *mut AmdGameConfig {
    let template = GameTemplate { num_days, rounds_per_day, ..GameTemplate::default() };
    Box::into_raw(Box::new(AmdGameConfig { markets: Vec::new(), template, seed }))
}

/// Adds a market running `genome`. The genome handle is copied, not taken.
///
/// # Safety
/// Both pointers must be null or live handles.
#[no_mangle]
pub unsafe extern "C" fn amd_game_config_add_market(config: *mut AmdGameConfig, genome: *const AmdGenome) -> AmdStatus {
    match (config.as_mut(), genome.as_ref()) {
        (Some(c), Some(g)) => {
            c.markets.push(g.0);
            AmdStatus::Ok
        }
        _ => fail(AmdStatus::NullPointer, "config or genome is null"),
    }
}

/// Sets the population: `traders` traders, alternating buyer and seller,
/// strategies from `strategy_mask` (`AMD_STRATEGY_*` bits) in equal blocks.
///
/// # Safety
/// `config` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn amd_game_config_set_population(
    config: *mut AmdGameConfig,
    traders: u32,
    value_low: f64,
    value_high: f64,
    strategy_mask: u32,
) -> AmdStatus {
    let Some(c) = config.as_mut() else {
        return fail(AmdStatus::NullPointer, "config is null");
    };
    if traders == 0 || !(value_low.is_finite() && value_high.is_finite() && value_low <= value_high) {
        return fail(AmdStatus::InvalidConfig, "need at least one trader and value_low <= value_high");
    }
    match strategies(strategy_mask) {
        Ok(s) => {
            c.template.traders = traders as usize;
            c.template.value_low = value_low;
            c.template.value_high = value_high;
            c.template.strategies = s;
            AmdStatus::Ok
        }
        Err(s) => s,
    }
}

/// # Safety
/// `config` must be null or a handle that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn amd_game_config_free(config: *mut AmdGameConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Plays the configured game. The same config and seed give the same result.
///
/// # Safety
/// `config` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn amd_game_run(config: *const AmdGameConfig, out: *mut *mut AmdGameResult) -> AmdStatus {
    guard(|| {
        let (Some(c), false) = (config.as_ref(), out.is_null()) else {
            return fail(AmdStatus::NullPointer, "config or out is null");
        };
        if c.markets.is_empty() {
            return fail(AmdStatus::InvalidConfig, "the game has no markets");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let game = c.template.build(c.markets.clone(), &mut rng);
        match run_game(&game) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(AmdGameResult(r)));
                AmdStatus::Ok
            }
            Err(e) => fail(AmdStatus::InvalidConfig, e.to_string()),
        }
    })
}

/// Number of markets in the result, 0 for null.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn amd_game_result_num_markets(result: *const AmdGameResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.markets.len())
}

/// Mean combined daily score of market `market`.
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn amd_game_result_score(result: *const AmdGameResult, market: usize, out: *mut f64) -> AmdStatus {
    let (Some(r), false) = (result.as_ref(), out.is_null()) else {
        return fail(AmdStatus::NullPointer, "result or out is null");
    };
    match r.0.scores.get(market) {
        Some(&s) => {
            *out = s;
            AmdStatus::Ok
        }
        None => fail(AmdStatus::OutOfRange, format!("market {market} of {}", r.0.scores.len())),
    }
}

/// # Safety
/// `result` must be null or a handle that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn amd_game_result_free(result: *mut AmdGameResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Runs `runs` single-market games of `genome` against a population of one
/// strategy (a single `AMD_STRATEGY_*` bit) and writes the mean allocative
/// efficiency and mean Smith's alpha. Either output is NaN when no run
/// produced a value.
///
/// # Safety
/// `genome` must be a live handle; `out_ea` and `out_alpha` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn amd_isolate_run(
    genome: *const AmdGenome,
    strategy: u32,
    traders_per_side: u32,
    runs: u32,
    seed: u64,
    out_ea: *mut f64,
    out_alpha: *mut f64,
) -> AmdStatus {
    guard(|| {
        let (Some(g), false, false) = (genome.as_ref(), out_ea.is_null(), out_alpha.is_null()) else {
            return fail(AmdStatus::NullPointer, "genome or an output is null");
        };
        let kind = match strategies(strategy) {
            Ok(k) if k.len() == 1 => k[0],
            Ok(_) => return fail(AmdStatus::InvalidConfig, "isolation takes exactly one strategy"),
            Err(s) => return s,
        };
        let mut cfg = IsolateConfig::new(g.0, kind);
        cfg.traders_per_side = traders_per_side as usize;
        cfg.runs = runs as usize;
        cfg.seed = seed;
        match run_isolate(&cfg) {
            Ok(r) => {
                *out_ea = r.ea.mean;
                *out_alpha = r.alpha.mean;
                AmdStatus::Ok
            }
            Err(e) => fail(AmdStatus::InvalidConfig, e.to_string()),
        }
    })
}
