use std::ffi::{CStr, CString};
use std::ptr;

use divisor_lab_ffi::*;

fn new_set(xs: &[u64]) -> *mut DlIntSet {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { dl_int_set_new(xs.as_ptr(), xs.len(), &mut out) },
        DlStatus::Ok
    );
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    let p = dl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn counts_and_elements() {
    let s = new_set(&[6, 3, 2, 1]);
    unsafe {
        assert_eq!(dl_int_set_len(s), 4);
        let mut total = 0;
        assert_eq!(dl_int_set_total(s, &mut total), DlStatus::Ok);
        assert_eq!(total, 12);

        let mut d = 0;
        assert_eq!(dl_divisor_count(s, &mut d), DlStatus::Ok);
        assert_eq!(d, 8);
        assert_eq!(dl_divisor_count_mitm(s, &mut d), DlStatus::Ok);
        assert_eq!(d, 8);
        assert_eq!(dl_divisor_count_k(s, 2, &mut d), DlStatus::Ok);
        assert_eq!(d, 2);
        assert_eq!(dl_divisor_count_k(s, 9, &mut d), DlStatus::Ok);
        assert_eq!(d, 0);

        let mut buf = [0u64; 4];
        let mut n = 0;
        assert_eq!(
            dl_int_set_elements(s, buf.as_mut_ptr(), 4, &mut n),
            DlStatus::Ok
        );
        assert_eq!((n, buf), (4, [1, 2, 3, 6]));
        assert_eq!(
            dl_int_set_elements(s, buf.as_mut_ptr(), 2, &mut n),
            DlStatus::BufferTooSmall
        );
        assert_eq!(n, 4);

        let mut c = DlCensus::default();
        assert_eq!(dl_census(s, false, &mut c), DlStatus::Ok);
        assert_eq!(c.neutral + 2 * c.abundant, 8);
        dl_int_set_free(s);
    }
}

#[test]
fn predicates_and_constructions() {
    let base = new_set(&[1, 2, 3, 4]);
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(dl_construct_anti_pencil(base, &mut a), DlStatus::Ok);
        let mut total = 0;
        dl_int_set_total(a, &mut total);
        assert_eq!(total, 2520);
        let mut yes = false;
        assert_eq!(dl_is_anti_pencil(a, &mut yes), DlStatus::Ok);
        assert!(yes);
        dl_int_set_free(a);

        let mut p = ptr::null_mut();
        assert_eq!(
            dl_construct_prime_set(base, &mut p),
            DlStatus::InvalidArgument
        );
        assert!(p.is_null());
        assert!(last_error().contains('1'));
        dl_int_set_free(base);

        let base = new_set(&[2, 3]);
        assert_eq!(dl_construct_prime_set(base, &mut p), DlStatus::Ok);
        assert_eq!(dl_is_prime_set(p, &mut yes), DlStatus::Ok);
        assert!(yes);
        let mut d = 0;
        dl_divisor_count(p, &mut d);
        assert_eq!(d, 1);
        dl_int_set_free(p);

        let mut k = ptr::null_mut();
        assert_eq!(dl_construct_k_anti_pencil(base, 1, &mut k), DlStatus::Ok);
        assert_eq!(dl_is_k_anti_pencil(k, 1, &mut yes), DlStatus::Ok);
        assert!(yes);
        dl_int_set_free(k);
        dl_int_set_free(base);
    }
}

#[test]
fn parse_and_errors() {
    let text = CString::new("{2,3,6}").unwrap();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(dl_int_set_parse(text.as_ptr(), &mut s), DlStatus::Ok);
        assert_eq!(dl_int_set_len(s), 3);
        dl_int_set_free(s);

        let bad = CString::new("3,0").unwrap();
        assert_eq!(dl_int_set_parse(bad.as_ptr(), &mut s), DlStatus::InvalidSet);
        assert!(!last_error().is_empty());

        assert_eq!(
            dl_int_set_new(ptr::null(), 3, &mut s),
            DlStatus::NullPointer
        );
        assert_eq!(dl_int_set_new(ptr::null(), 0, &mut s), DlStatus::InvalidSet);
        let mut total = 0;
        assert_eq!(
            dl_int_set_total(ptr::null(), &mut total),
            DlStatus::NullPointer
        );
        assert_eq!(dl_int_set_len(ptr::null()), 0);
        dl_int_set_free(ptr::null_mut());

        let big: Vec<u64> = (1..=30).collect();
        let s = new_set(&big);
        let mut d = 0;
        assert_eq!(dl_divisor_count(s, &mut d), DlStatus::Capacity);
        assert_eq!(dl_divisor_count_mitm(s, &mut d), DlStatus::Ok);
        assert!(d > 0);
        dl_int_set_free(s);
    }
}

#[test]
fn zero_sum() {
    let xs: [i64; 4] = [-3, -2, -1, 6];
    let mut z = ptr::null_mut();
    unsafe {
        assert_eq!(
            dl_zero_sum_set_new(xs.as_ptr(), xs.len(), &mut z),
            DlStatus::Ok
        );
        let mut mu = 0;
        assert_eq!(dl_mu(z, &mut mu), DlStatus::Ok);
        assert_eq!(mu, 9);
        assert_eq!(dl_mu_k(z, 1, &mut mu), DlStatus::Ok);
        assert_eq!(mu, 1);
        dl_zero_sum_set_free(z);

        let bad: [i64; 2] = [1, 2];
        assert_eq!(
            dl_zero_sum_set_new(bad.as_ptr(), 2, &mut z),
            DlStatus::InvalidSet
        );
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(dl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
