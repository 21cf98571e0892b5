//! C ABI over the `tsingular` library.
//!
//! Fields and subspaces cross the boundary as opaque handles that the caller
//! frees with the matching `_free` function. Counts come back as
//! NUL-terminated decimal strings, since they routinely overflow 64 bits;
//! release them with [`tsg_string_free`]. Shapes and types are passed as
//! comma-separated text such as `"1,1,1"`.
//!
//! Every function returns a [`TsgStatus`]. On failure a description is kept
//! per thread and can be read with [`tsg_last_error`]. Panics never unwind
//! into C; they surface as `TSG_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tsingular::qcount::{self, Shape, TypeVector};
use tsingular::suborbits::{self, Guards};
use tsingular::{spaces, Error, FieldSpec, Matrix, Subspace};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    TooLarge = 3,
    SeparationViolation = 4,
    Panic = 5,
}

/// A finite field GF(q).
pub struct TsgField(FieldSpec);

/// A subspace of GF(q)^n in canonical form.
pub struct TsgSubspace(Subspace);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

enum Fail {
    Null(&'static str),
    Lib(Error),
    Arg(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn call(f: impl FnOnce() -> Result<(), Fail>) -> TsgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TsgStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("{what} is null"));
            TsgStatus::NullPointer
        }
        Ok(Err(Fail::Arg(msg))) => {
            set_error(msg);
            TsgStatus::InvalidArgument
        }
        Ok(Err(Fail::Lib(e))) => {
            let status = match e {
                Error::TooLarge { .. } => TsgStatus::TooLarge,
                Error::SeparationViolation { .. } => TsgStatus::SeparationViolation,
                _ => TsgStatus::InvalidArgument,
            };
            set_error(e.to_string());
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            TsgStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Arg(format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    let c = CString::new(s).map_err(|_| Fail::Arg("result contains NUL".into()))?;
    out.write(c.into_raw());
    Ok(())
}

unsafe fn shape_and_type(shape: *const c_char, ty: *const c_char) -> Result<(Shape, TypeVector), Fail> {
    Ok((text(shape, "shape")?.parse()?, text(ty, "type")?.parse()?))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn tsg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tsg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// GF(q) with the default defining polynomial.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_field_new(q: u64, out: *mut *mut TsgField) -> TsgStatus {
    call(|| {
        let f = FieldSpec::from_order(q)?;
        write_out(out, Box::into_raw(Box::new(TsgField(f))))
    })
}

/// Frees a field. Null is ignored.
///
/// # Safety
/// `field` must come from [`tsg_field_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tsg_field_free(field: *mut TsgField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// The order q, or 0 for null.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tsg_field_order(field: *const TsgField) -> u32 {
    field.as_ref().map_or(0, |f| f.0.q())
}

/// Row space of a `rows x cols` matrix given row-major as element codes.
///
/// # Safety
/// `codes` must point to `rows * cols` readable values (it may be null when
/// that product is 0); `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_subspace_from_codes(
    field: *const TsgField,
    rows: usize,
    cols: usize,
    codes: *const u32,
    out: *mut *mut TsgSubspace,
) -> TsgStatus {
    call(|| {
        let f = handle(field, "field")?;
        let len = rows.checked_mul(cols).ok_or_else(|| Fail::Arg("matrix too large".into()))?;
        let codes = if len == 0 {
            &[][..]
        } else if codes.is_null() {
            return Err(Fail::Null("codes"));
        } else {
            std::slice::from_raw_parts(codes, len)
        };
        let m = Matrix::from_codes(&f.0, rows, cols, codes)?;
        write_out(out, Box::into_raw(Box::new(TsgSubspace(Subspace::from_matrix(&m)))))
    })
}

/// The canonical representative of subspaces of `type` for `shape`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_canonical(
    field: *const TsgField,
    shape: *const c_char,
    ty: *const c_char,
    out: *mut *mut TsgSubspace,
) -> TsgStatus {
    call(|| {
        let f = handle(field, "field")?;
        let (shape, k) = shape_and_type(shape, ty)?;
        let u = spaces::orbit_representative(&shape, &k, &f.0)?;
        write_out(out, Box::into_raw(Box::new(TsgSubspace(u))))
    })
}

/// Frees a subspace. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tsg_subspace_free(s: *mut TsgSubspace) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Dimension of `s`, or 0 for null.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tsg_subspace_dim(s: *const TsgSubspace) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

/// The reduced basis as text: rows on separate lines, codes separated by
/// spaces.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_subspace_text(s: *const TsgSubspace, out: *mut *mut c_char) -> TsgStatus {
    call(|| {
        let s = handle(s, "subspace")?;
        write_string(out, s.0.basis().to_text())
    })
}

/// The type of `s` for `shape`, as `"k1,...,kt"`.
///
/// # Safety
/// `shape` must be NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_type_of(s: *const TsgSubspace, shape: *const c_char, out: *mut *mut c_char) -> TsgStatus {
    call(|| {
        let s = handle(s, "subspace")?;
        let shape: Shape = text(shape, "shape")?.parse()?;
        write_string(out, spaces::type_of(&shape, &s.0)?.to_string())
    })
}

/// Gaussian binomial coefficient.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_gauss(n: i64, k: i64, q: u64, out: *mut *mut c_char) -> TsgStatus {
    call(|| write_string(out, qcount::gauss(n, k, q)?.to_string()))
}

/// Number of `m x n` matrices of rank `i`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_count_rank_matrices(i: i64, m: i64, n: i64, q: u64, out: *mut *mut c_char) -> TsgStatus {
    call(|| write_string(out, qcount::count_rank_matrices(i, m, n, q)?.to_string()))
}

/// Order of the block upper-triangular group for `shape`.
///
/// # Safety
/// `shape` must be NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_group_order(shape: *const c_char, q: u64, out: *mut *mut c_char) -> TsgStatus {
    call(|| {
        let shape: Shape = text(shape, "shape")?.parse()?;
        write_string(out, qcount::group_order(&shape, q)?.to_string())
    })
}

/// Number of subspaces of `type` for `shape`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_anzahl(shape: *const c_char, ty: *const c_char, q: u64, out: *mut *mut c_char) -> TsgStatus {
    call(|| {
        let (shape, k) = shape_and_type(shape, ty)?;
        write_string(out, qcount::anzahl(&shape, &k, q)?.to_string())
    })
}

/// Number of `sub_type` subspaces inside a fixed subspace of `type`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_count_contained(
    shape: *const c_char,
    ty: *const c_char,
    sub_type: *const c_char,
    q: u64,
    out: *mut *mut c_char,
) -> TsgStatus {
    call(|| {
        let (shape, k) = shape_and_type(shape, ty)?;
        let l: TypeVector = text(sub_type, "sub_type")?.parse()?;
        write_string(out, qcount::count_contained(&shape, &k, &l, q)?.to_string())
    })
}

/// Number of subspaces of `type` containing a fixed subspace of `sub_type`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_count_containing(
    shape: *const c_char,
    ty: *const c_char,
    sub_type: *const c_char,
    q: u64,
    out: *mut *mut c_char,
) -> TsgStatus {
    call(|| {
        let (shape, k) = shape_and_type(shape, ty)?;
        let l: TypeVector = text(sub_type, "sub_type")?.parse()?;
        write_string(out, qcount::count_containing(&shape, &l, &k, q)?.to_string())
    })
}

/// The printed suborbit count for a three-block shape.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_suborbit_count_printed(
    shape: *const c_char,
    ty: *const c_char,
    q: u64,
    out: *mut *mut c_char,
) -> TsgStatus {
    call(|| {
        let (shape, k) = shape_and_type(shape, ty)?;
        write_string(out, suborbits::suborbit_count_printed(&shape, &k, q)?.to_string())
    })
}

/// Compares the printed suborbit formulas with brute force and writes the
/// report as JSON. `guard` caps both the group order and the number of
/// subspaces; 0 selects the defaults.
///
/// # Safety
/// String arguments must be NUL-terminated; `out_json` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn tsg_cross_validate(
    field: *const TsgField,
    shape: *const c_char,
    ty: *const c_char,
    guard: u64,
    out_json: *mut *mut c_char,
) -> TsgStatus {
    call(|| {
        let f = handle(field, "field")?;
        let (shape, k) = shape_and_type(shape, ty)?;
        let guards = if guard == 0 { Guards::default() } else { Guards { group: guard, subspace: guard } };
        let report = suborbits::cross_validate(&shape, &k, &f.0, guards)?;
        write_string(out_json, serde_json::to_string(&report).expect("report serializes"))
    })
}
