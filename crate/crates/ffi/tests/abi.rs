use std::ffi::{c_char, CStr};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use quadmap_ffi::*;

fn new_map(c: [f64; 12]) -> *mut QmMap {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qm_map_new(c.as_ptr(), &mut m) }, QmStatus::Ok);
    m
}

fn last_error() -> String {
    let mut needed = 0;
    unsafe {
        assert_eq!(qm_last_error(ptr::null_mut(), 0, &mut needed), QmStatus::BufferTooSmall);
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(qm_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()), QmStatus::Ok);
        CStr::from_ptr(buf.as_ptr()).to_str().unwrap().to_owned()
    }
}

fn label_of(m: *const QmMap) -> &'static str {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(qm_classify(m, &mut c), QmStatus::Ok);
        let mut l = u32::MAX;
        assert_eq!(qm_classification_label(c, &mut l), QmStatus::Ok);
        qm_classification_free(c);
        CStr::from_ptr(qm_label_name(l)).to_str().unwrap()
    }
}

#[test]
fn labels_are_enumerable() {
    assert_eq!(qm_label_count(), 18);
    let names: Vec<&str> =
        (0..qm_label_count()).map(|i| unsafe { CStr::from_ptr(qm_label_name(i)) }.to_str().unwrap()).collect();
    assert_eq!(names[0], "E1");
    assert_eq!(names[17], "DP5");
    assert!(qm_label_name(18).is_null());
}

#[test]
fn classifies_a_conjugated_map() {
    // (x² − y² + x, 2xy − y) shifted: x → x + 1
    let m = new_map([1., 0., -1., 3., 0., 2., 0., 2., 0., 0., 1., 0.]);
    assert_eq!(label_of(m), "E1");
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(qm_classify(m, &mut c), QmStatus::Ok);
        let mut r = f64::NAN;
        assert_eq!(qm_classification_residual(c, &mut r), QmStatus::Ok);
        assert!(r <= 1e-9);
        let (mut h, mut k) = ([0.0; 6], [0.0; 6]);
        assert_eq!(qm_classification_witness(c, h.as_mut_ptr(), k.as_mut_ptr()), QmStatus::Ok);
        assert!(h[0] * h[3] - h[1] * h[2] != 0.0);
        assert!(k[0] * k[3] - k[1] * k[2] != 0.0);
        qm_classification_free(c);
        qm_map_free(m);
    }
}

#[test]
fn json_maps_and_reports() {
    let json = c"{\"a20\": 1, \"a01\": 1, \"b10\": 1}";
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(qm_map_from_json(json.as_ptr(), &mut m), QmStatus::Ok);
        let mut coeffs = [f64::NAN; 12];
        assert_eq!(qm_map_coefficients(m, coeffs.as_mut_ptr()), QmStatus::Ok);
        assert_eq!(coeffs, [1., 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0.]);
        assert_eq!(label_of(m), "DP1");

        let mut s = ptr::null_mut();
        assert_eq!(qm_report_json(m, 3, &mut s), QmStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(report["label"], "DP1");
        assert_eq!(report["seed"], 3);
        qm_string_free(s);
        qm_map_free(m);

        let mut bad = ptr::null_mut();
        assert_eq!(qm_map_from_json(c"{\"zz\": 1}".as_ptr(), &mut bad), QmStatus::InvalidArgument);
        assert!(bad.is_null());
        assert!(!last_error().is_empty());
    }
}

#[test]
fn preimage_counts() {
    // z ↦ z²: two preimages off the origin, one at it
    let m = new_map([1., 0., -1., 0., 0., 0., 0., 2., 0., 0., 0., 0.]);
    let mut n = 0;
    unsafe {
        assert_eq!(qm_preimage_count(m, 1.0, 0.5, &mut n), QmStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(qm_preimage_count(m, 0.0, 0.0, &mut n), QmStatus::Ok);
        assert_eq!(n, 1);
        assert_eq!(qm_preimage_count(m, f64::NAN, 0.0, &mut n), QmStatus::InvalidArgument);
        qm_map_free(m);
    }
    // (x², xy): every point of the line x = 0 maps to the origin
    let m = new_map([1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 0., 0.]);
    unsafe {
        assert_eq!(qm_preimage_count(m, 0.0, 0.0, &mut n), QmStatus::Ok);
        assert_eq!(n, -1);
        qm_map_free(m);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(qm_map_new(ptr::null(), &mut m), QmStatus::NullPointer);
        let inf = [f64::INFINITY; 12];
        assert_eq!(qm_map_new(inf.as_ptr(), &mut m), QmStatus::InvalidArgument);
        assert!(last_error().contains("non-finite"));

        let affine = new_map([0., 0., 0., 1., 0., 0., 0., 0., 0., 0., 1., 0.]);
        let mut c = ptr::null_mut();
        assert_eq!(qm_classify(affine, &mut c), QmStatus::Domain);
        assert!(c.is_null());
        assert!(last_error().contains("quadratic"));
        qm_map_free(affine);

        assert_eq!(qm_classify(ptr::null(), &mut c), QmStatus::NullPointer);
        let mut tiny = [0 as c_char; 2];
        assert_eq!(qm_last_error(tiny.as_mut_ptr(), tiny.len(), ptr::null_mut()), QmStatus::BufferTooSmall);

        qm_map_free(ptr::null_mut());
        qm_classification_free(ptr::null_mut());
        qm_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/quadmap.h");
    let header_text = std::fs::read_to_string(&header).unwrap();
    for f in ["qm_map_new", "qm_classify", "qm_preimage_count", "qm_last_error", "QM_STATUS_OK"] {
        assert!(header_text.contains(f), "{f} missing from header");
    }
    let tmp = tempdir();
    let src = tmp.join("use.c");
    std::fs::write(
        &src,
        "#include \"quadmap.h\"\nint main(void) { QmMap *m = 0; double c[12] = {1}; \
         return qm_map_new(c, &m) == QM_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(dir.join("include"))
            .arg(&src)
            .output()
        else {
            eprintln!("{compiler} not available, skipping");
            continue;
        };
        assert!(out.status.success(), "{compiler}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

fn tempdir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("quadmap-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
