use std::ffi::CString;
use std::ptr;

use dickson_shds_ffi::*;

struct Field(*mut ShdsField);

impl Field {
    fn new(m: u32) -> Self {
        let mut f = ptr::null_mut();
        assert_eq!(unsafe { shds_field_new(m, ptr::null(), 0, &mut f) }, ShdsStatus::Ok);
        Field(f)
    }

    fn set(&self, label: &str, pds: bool) -> Result<*mut ShdsSet, ShdsStatus> {
        let label = CString::new(label).unwrap();
        let mut s = ptr::null_mut();
        match unsafe { shds_set_build(self.0, label.as_ptr(), pds, &mut s) } {
            ShdsStatus::Ok => Ok(s),
            e => Err(e),
        }
    }
}

impl Drop for Field {
    fn drop(&mut self) {
        unsafe { shds_field_free(self.0) }
    }
}

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 512];
    let n = unsafe { shds_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(511)].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn field_arithmetic() {
    let f = Field::new(5);
    unsafe {
        assert_eq!(shds_field_order(f.0), 243);
        let mut v = 0;
        assert_eq!(shds_field_add(f.0, 1, 2, &mut v), ShdsStatus::Ok);
        assert_eq!(v, 0);
        let g = shds_field_generator(f.0);
        assert_eq!(shds_field_mul(f.0, g, 1, &mut v), ShdsStatus::Ok);
        assert_eq!(v, g);
        assert_eq!(shds_field_mul(f.0, 243, 1, &mut v), ShdsStatus::InvalidArgument);
        assert!(last_error().contains("243"));
        assert_eq!(shds_field_add(ptr::null(), 1, 1, &mut v), ShdsStatus::NullPointer);
        assert_eq!(shds_field_order(ptr::null()), 0);
    }
}

#[test]
fn field_errors() {
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(shds_field_new(0, ptr::null(), 0, &mut f), ShdsStatus::Capacity);
        assert_eq!(shds_field_new(40, ptr::null(), 0, &mut f), ShdsStatus::Capacity);
        let reducible = [1u8, 0, 0, 1];
        assert_eq!(shds_field_new(3, reducible.as_ptr(), 4, &mut f), ShdsStatus::InvalidArgument);
        assert!(last_error().contains("reducible"));
        assert!(f.is_null());
        assert_eq!(shds_field_new(3, ptr::null(), 0, ptr::null_mut()), ShdsStatus::NullPointer);
        let custom = [2u8, 2, 0, 1];
        assert_eq!(shds_field_new(3, custom.as_ptr(), 4, &mut f), ShdsStatus::Ok);
        shds_field_free(f);
        shds_field_free(ptr::null_mut());
    }
}

#[test]
fn sets_and_reports() {
    let f = Field::new(5);
    let s = f.set("d7:-1", false).unwrap();
    unsafe {
        assert_eq!(shds_set_len(s), 121);
        let mut n = 0;
        let mut small = [0u32; 4];
        assert_eq!(shds_set_elements(s, small.as_mut_ptr(), 4, &mut n), ShdsStatus::BufferTooSmall);
        assert_eq!(n, 121);
        let mut buf = vec![0u32; n];
        assert_eq!(shds_set_elements(s, buf.as_mut_ptr(), buf.len(), &mut n), ShdsStatus::Ok);
        assert!(buf.windows(2).all(|w| w[0] < w[1]));

        let mut r = std::mem::zeroed::<ShdsDifferenceReport>();
        assert_eq!(shds_difference_report(f.0, s, &mut r), ShdsStatus::Ok);
        assert_eq!((r.v, r.k, r.lambda, r.verdict, r.skew), (243, 121, 60, ShdsVerdict::DifferenceSet, true));

        let (mut lo, mut hi) = (0, 0);
        assert_eq!(shds_triple_minmax(f.0, s, &mut lo, &mut hi), ShdsStatus::Ok);
        assert_eq!(hi, 36);
        assert_eq!(lo, 23);

        let copy = {
            let mut c = ptr::null_mut();
            assert_eq!(shds_set_from_elements(f.0, buf.as_ptr(), buf.len(), &mut c), ShdsStatus::Ok);
            c
        };
        assert_eq!(shds_set_len(copy), 121);
        shds_set_free(copy);
        shds_set_free(s);
    }
}

#[test]
fn pds_mode_and_gates() {
    let f4 = Field::new(4);
    assert_eq!(f4.set("d7:1", false).unwrap_err(), ShdsStatus::Precondition);
    assert!(last_error().contains("even"));
    let s = f4.set("d7:1", true).unwrap();
    unsafe {
        let mut r = std::mem::zeroed::<ShdsDifferenceReport>();
        assert_eq!(shds_difference_report(f4.0, s, &mut r), ShdsStatus::Ok);
        assert_eq!((r.verdict, r.lambda, r.mu), (ShdsVerdict::PartialDifferenceSet, 19, 20));
        shds_set_free(s);
    }
    assert_eq!(f4.set("bogus", true).unwrap_err(), ShdsStatus::Parse);
}

#[test]
fn foreign_set_is_rejected() {
    let f5 = Field::new(5);
    let f3 = Field::new(3);
    let s = f3.set("paley", false).unwrap();
    unsafe {
        let mut r = std::mem::zeroed::<ShdsDifferenceReport>();
        assert_eq!(shds_difference_report(f5.0, s, &mut r), ShdsStatus::Precondition);
        shds_set_free(s);
    }
}

#[test]
fn digit_scans() {
    unsafe {
        let mut r = std::mem::zeroed::<ShdsScanResult>();
        assert_eq!(shds_goal41(5, 0, 0, &mut r), ShdsStatus::Ok);
        assert!(r.holds && r.instances == 242 && r.min >= 5);
        assert_eq!(shds_goal42(5, 0, 0, &mut r), ShdsStatus::Ok);
        assert!(r.holds && r.instances == 242 * 242);
        assert_eq!(shds_carry_audit(7, 2000, 1, &mut r), ShdsStatus::Ok);
        assert!(r.holds && r.instances == 2000);
        assert_eq!(shds_goal41(4, 0, 0, &mut r), ShdsStatus::Precondition);
        assert_eq!(shds_goal42(5, 0, 0, ptr::null_mut()), ShdsStatus::NullPointer);
    }
}
