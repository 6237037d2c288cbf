//! C ABI over `grc-core`.
//!
//! Grammars are exposed as opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible function returns a
//! [`GrcStatus`]; on failure a description is available from
//! [`grc_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use grc_core::format;
use grc_core::hybrid::{run_hybrid, HybridConfig, Phase1Engine, ShrinkFactor};
use grc_core::recompress::{fast, scan, Options};
use grc_core::slp::{build_slp_bytes, expand_slp_to_writer};
use grc_core::symbol::symbols_from_bytes;
use grc_core::text::{fast::repair_fast, naive::repair_naive};
use grc_core::{Error, RePairGrammar, Slp};

/// Status codes; format and internal errors share their values with the
/// `grc` exit codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GrcStatus {
    Ok = 0,
    NullArgument = 1,
    Format = 2,
    Internal = 4,
    Io = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GrcEngine {
    TextNaive = 0,
    TextFast = 1,
    Scan = 2,
    Fast = 3,
}

/// An owned byte buffer returned by the library; release it with
/// [`grc_buffer_free`].
#[repr(C)]
pub struct GrcBuffer {
    pub data: *mut u8,
    pub len: usize,
}

/// Opaque straight-line program.
pub struct GrcSlp(Slp);

/// Opaque RePair grammar.
pub struct GrcGrammar(RePairGrammar);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GrcStatus {
    if e.is_internal() {
        GrcStatus::Internal
    } else if matches!(e, Error::Io(_)) {
        GrcStatus::Io
    } else if matches!(e, Error::Param(_)) {
        GrcStatus::InvalidArgument
    } else {
        GrcStatus::Format
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), (GrcStatus, String)>>(f: F) -> GrcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GrcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside grc".into());
            GrcStatus::Panic
        }
    }
}

fn core_err(e: Error) -> (GrcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_arg(name: &str) -> (GrcStatus, String) {
    (GrcStatus::NullArgument, format!("{name} is null"))
}

/// # Safety
/// `data` must be valid for `len` reads (or null with `len == 0`).
unsafe fn input<'a>(data: *const u8, len: usize) -> Result<&'a [u8], (GrcStatus, String)> {
    if data.is_null() {
        if len == 0 {
            return Ok(&[]);
        }
        return Err(null_arg("data"));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

fn into_buffer(bytes: Vec<u8>) -> GrcBuffer {
    let boxed = bytes.into_boxed_slice();
    let len = boxed.len();
    GrcBuffer { data: Box::into_raw(boxed) as *mut u8, len }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn grc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds an SLP of `text` with the pairing builder (alphabet: bytes).
///
/// # Safety
/// `text` must be valid for `len` reads; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grc_slp_build(text: *const u8, len: usize, out: *mut *mut GrcSlp) -> GrcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let slp = build_slp_bytes(input(text, len)?).map_err(core_err)?;
        *out = Box::into_raw(Box::new(GrcSlp(slp)));
        Ok(())
    })
}

/// Parses an SLP in binary or text format.
///
/// # Safety
/// `data` must be valid for `len` reads; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grc_slp_from_bytes(data: *const u8, len: usize, out: *mut *mut GrcSlp) -> GrcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        match format::read_grammar(input(data, len)?).map_err(core_err)? {
            format::GrammarFile::Slp(slp) => {
                *out = Box::into_raw(Box::new(GrcSlp(slp)));
                Ok(())
            }
            format::GrammarFile::RePair(_) => {
                Err((GrcStatus::Format, "expected an SLP, found a RePair grammar".into()))
            }
        }
    })
}

/// Serializes an SLP in the binary format.
///
/// # Safety
/// `slp` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grc_slp_to_bytes(slp: *const GrcSlp, out: *mut GrcBuffer) -> GrcStatus {
    guard(|| {
        let slp = slp.as_ref().ok_or_else(|| null_arg("slp"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = into_buffer(format::slp_to_bytes(&slp.0).map_err(core_err)?);
        Ok(())
    })
}

/// Number of rules, or 0 for a null handle.
///
/// # Safety
/// `slp` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn grc_slp_rule_count(slp: *const GrcSlp) -> usize {
    slp.as_ref().map_or(0, |s| s.0.n())
}

/// Expands an SLP.
///
/// # Safety
/// `slp` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grc_slp_expand(slp: *const GrcSlp, out: *mut GrcBuffer) -> GrcStatus {
    guard(|| {
        let slp = slp.as_ref().ok_or_else(|| null_arg("slp"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let mut bytes = Vec::new();
        expand_slp_to_writer(&slp.0, &mut bytes).map_err(core_err)?;
        *out = into_buffer(bytes);
        Ok(())
    })
}

/// # Safety
/// `slp` must be null or come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn grc_slp_free(slp: *mut GrcSlp) {
    if !slp.is_null() {
        drop(Box::from_raw(slp));
    }
}

/// RePair of a byte text with `GRC_ENGINE_TEXT_NAIVE` or `GRC_ENGINE_TEXT_FAST`.
///
/// # Safety
/// `text` must be valid for `len` reads; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grc_repair_text(
    text: *const u8,
    len: usize,
    engine: GrcEngine,
    out: *mut *mut GrcGrammar,
) -> GrcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let symbols = symbols_from_bytes(input(text, len)?);
        let (g, _) = match engine {
            GrcEngine::TextNaive => repair_naive(&symbols, 256),
            GrcEngine::TextFast => repair_fast(&symbols, 256),
            _ => return Err((GrcStatus::InvalidArgument, "not a text engine".into())),
        }
        .map_err(core_err)?;
        *out = Box::into_raw(Box::new(GrcGrammar(g)));
        Ok(())
    })
}

/// RePair computed on an SLP with `GRC_ENGINE_SCAN` or `GRC_ENGINE_FAST`.
///
/// # Safety
/// `slp` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grc_recompress(slp: *const GrcSlp, engine: GrcEngine, out: *mut *mut GrcGrammar) -> GrcStatus {
    guard(|| {
        let slp = slp.as_ref().ok_or_else(|| null_arg("slp"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let (g, _) = match engine {
            GrcEngine::Scan => scan::run(&slp.0),
            GrcEngine::Fast => fast::run_fast(&slp.0),
            _ => return Err((GrcStatus::InvalidArgument, "not an SLP engine".into())),
        }
        .map_err(core_err)?;
        *out = Box::into_raw(Box::new(GrcGrammar(g)));
        Ok(())
    })
}

/// Hybrid run with shrink factor `t` (0 means never switch).
///
/// # Safety
/// `slp` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grc_hybrid(
    slp: *const GrcSlp,
    t: u64,
    phase1: GrcEngine,
    out: *mut *mut GrcGrammar,
) -> GrcStatus {
    guard(|| {
        let slp = slp.as_ref().ok_or_else(|| null_arg("slp"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let phase1 = match phase1 {
            GrcEngine::Scan => Phase1Engine::Scan,
            GrcEngine::Fast => Phase1Engine::Fast,
            _ => return Err((GrcStatus::InvalidArgument, "not an SLP engine".into())),
        };
        let t = if t == 0 { ShrinkFactor::Never } else { ShrinkFactor::Finite(t) };
        let cfg = HybridConfig { t, phase1, opts: Options::default() };
        let result = run_hybrid(&slp.0, cfg).map_err(core_err)?;
        *out = Box::into_raw(Box::new(GrcGrammar(result.grammar)));
        Ok(())
    })
}

/// Parses a RePair grammar in binary or text format.
///
/// # Safety
/// `data` must be valid for `len` reads; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grc_grammar_from_bytes(data: *const u8, len: usize, out: *mut *mut GrcGrammar) -> GrcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        match format::read_grammar(input(data, len)?).map_err(core_err)? {
            format::GrammarFile::RePair(g) => {
                *out = Box::into_raw(Box::new(GrcGrammar(g)));
                Ok(())
            }
            format::GrammarFile::Slp(_) => Err((GrcStatus::Format, "expected a RePair grammar, found an SLP".into())),
        }
    })
}

/// Serializes a grammar in the binary format.
///
/// # Safety
/// `grammar` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grc_grammar_to_bytes(grammar: *const GrcGrammar, out: *mut GrcBuffer) -> GrcStatus {
    guard(|| {
        let g = grammar.as_ref().ok_or_else(|| null_arg("grammar"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = into_buffer(format::rpg_to_bytes(&g.0).map_err(core_err)?);
        Ok(())
    })
}

/// Expands a grammar back to its text.
///
/// # Safety
/// `grammar` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn grc_grammar_expand(grammar: *const GrcGrammar, out: *mut GrcBuffer) -> GrcStatus {
    guard(|| {
        let g = grammar.as_ref().ok_or_else(|| null_arg("grammar"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let mut bytes = Vec::new();
        g.0.expand_to_writer(&mut bytes).map_err(core_err)?;
        *out = into_buffer(bytes);
        Ok(())
    })
}

/// Number of introduced pairs, or 0 for a null handle.
///
/// # Safety
/// `grammar` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn grc_grammar_pair_count(grammar: *const GrcGrammar) -> usize {
    grammar.as_ref().map_or(0, |g| g.0.m())
}

/// Length of the final sequence, or 0 for a null handle.
///
/// # Safety
/// `grammar` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn grc_grammar_final_len(grammar: *const GrcGrammar) -> usize {
    grammar.as_ref().map_or(0, |g| g.0.final_seq.len())
}

/// # Safety
/// `grammar` must be null or come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn grc_grammar_free(grammar: *mut GrcGrammar) {
    if !grammar.is_null() {
        drop(Box::from_raw(grammar));
    }
}

/// # Safety
/// `buf` must have been filled by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn grc_buffer_free(buf: GrcBuffer) {
    if !buf.data.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(buf.data, buf.len)));
    }
}
