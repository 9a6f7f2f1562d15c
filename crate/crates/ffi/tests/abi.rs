use std::ffi::{CStr, CString};
use std::ptr;

use catbound_ffi::*;

fn path3() -> *mut CatboundGraph {
    let endpoints = [0u32, 1, 1, 2];
    let mut g = ptr::null_mut();
    let status = unsafe { catbound_graph_from_edges(3, endpoints.as_ptr(), 2, &mut g) };
    assert_eq!(status, CatboundStatus::Ok);
    g
}

fn last_error() -> String {
    let p = catbound_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn graph_counts() {
    let g = path3();
    unsafe {
        assert_eq!(catbound_graph_vertex_count(g), 3);
        assert_eq!(catbound_graph_edge_count(g), 2);
        catbound_graph_free(g);
        assert_eq!(catbound_graph_vertex_count(ptr::null()), 0);
        catbound_graph_free(ptr::null_mut());
    }
}

#[test]
fn stats_through_abi() {
    let g = path3();
    let mut value = 0.0;
    let mut log_value = 0.0;
    unsafe {
        let p = [2.0];
        let s = catbound_stat(
            g,
            CatboundStatKind::Star,
            p.as_ptr(),
            1,
            false,
            &mut value,
            &mut log_value,
        );
        assert_eq!(s, CatboundStatus::Ok);
        assert_eq!(value, 6.0);
        assert!((log_value - 6f64.ln()).abs() < 1e-12);

        let w = [0.0; 5];
        let s = catbound_stat(
            g,
            CatboundStatKind::CatW,
            w.as_ptr(),
            5,
            true,
            &mut value,
            ptr::null_mut(),
        );
        assert_eq!(s, CatboundStatus::Ok);
        assert_eq!(value, 12.0);

        let s = catbound_stat(
            g,
            CatboundStatKind::CatW,
            w.as_ptr(),
            2,
            false,
            &mut value,
            ptr::null_mut(),
        );
        assert_eq!(s, CatboundStatus::InvalidArgument);

        let bad = [0.5, 2.0];
        let s = catbound_stat(
            g,
            CatboundStatKind::BiStar,
            bad.as_ptr(),
            2,
            false,
            &mut value,
            ptr::null_mut(),
        );
        assert_eq!(s, CatboundStatus::Domain);
        assert!(!last_error().is_empty());
        catbound_graph_free(g);
    }
}

#[test]
fn counting_and_bounds() {
    let g = path3();
    let name = CString::new("path3").unwrap();
    let mut count = 0u64;
    unsafe {
        assert_eq!(
            catbound_count_homs(g, name.as_ptr(), 0, &mut count),
            CatboundStatus::Ok
        );
        assert_eq!(count, 6);

        let mut bound = 0.0;
        let mut log_bound = 0.0;
        let s = catbound_bound(
            g,
            name.as_ptr(),
            CatboundMethod::Www,
            &mut bound,
            &mut log_bound,
        );
        assert_eq!(s, CatboundStatus::Ok);
        assert!(bound >= 6.0 * (1.0 - 1e-9));
        let mut star = 0.0;
        let s = catbound_bound(
            g,
            name.as_ptr(),
            CatboundMethod::Star,
            &mut star,
            ptr::null_mut(),
        );
        assert_eq!(s, CatboundStatus::Ok);
        assert!(bound <= star * (1.0 + 1e-9));

        let long = CString::new("path5").unwrap();
        let s = catbound_count_homs(g, long.as_ptr(), 1, &mut count);
        assert_eq!(s, CatboundStatus::BudgetExceeded);
        assert!(last_error().contains("budget"));

        let unknown = CString::new("dodecahedron").unwrap();
        let s = catbound_count_homs(g, unknown.as_ptr(), 0, &mut count);
        assert_eq!(s, CatboundStatus::InvalidArgument);
        catbound_graph_free(g);
    }
}

#[test]
fn null_and_load_errors() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(
            catbound_graph_load(ptr::null(), &mut g),
            CatboundStatus::NullPointer
        );
        let missing = CString::new("/nonexistent/graph.txt").unwrap();
        assert_eq!(
            catbound_graph_load(missing.as_ptr(), &mut g),
            CatboundStatus::Io
        );
        let mut value = 0.0;
        let s = catbound_stat(
            ptr::null(),
            CatboundStatKind::EdgeCount,
            ptr::null(),
            0,
            false,
            &mut value,
            ptr::null_mut(),
        );
        assert_eq!(s, CatboundStatus::NullPointer);
    }
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    std::fs::write(&file, "a b\nb c\nc\n").unwrap();
    let path = CString::new(file.to_str().unwrap()).unwrap();
    unsafe {
        assert_eq!(
            catbound_graph_load(path.as_ptr(), &mut g),
            CatboundStatus::Parse
        );
        assert!(last_error().contains("line 3"));
        std::fs::write(&file, "a b\nb c\n").unwrap();
        assert_eq!(
            catbound_graph_load(path.as_ptr(), &mut g),
            CatboundStatus::Ok
        );
        assert_eq!(catbound_graph_edge_count(g), 2);
        catbound_graph_free(g);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/catbound.h");
    for symbol in [
        "catbound_graph_load",
        "catbound_graph_from_edges",
        "catbound_graph_free",
        "catbound_graph_vertex_count",
        "catbound_graph_edge_count",
        "catbound_stat",
        "catbound_count_homs",
        "catbound_bound",
        "catbound_last_error_message",
        "CATBOUND_STATUS_BUDGET_EXCEEDED",
        "typedef struct CatboundGraph CatboundGraph",
    ] {
        assert!(header.contains(symbol), "{symbol} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/catbound.h");
    match std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .output()
    {
        Ok(out) => assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        ),
        Err(_) => eprintln!("no C compiler on PATH; header syntax not checked"),
    }
}
