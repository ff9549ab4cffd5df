fn main() {
    // The `lapack` crate declares the FFI signatures only; the system OpenBLAS
    // provides both BLAS and LAPACK symbols.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
