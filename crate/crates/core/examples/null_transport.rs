//! Print the null-direction transport table used by length-2 certificates.

fn main() {
    let r = cocal_core::certificate::derive_null_transport().expect("standard split dual decomposes");
    println!("pub const NULL_TRANSPORT: [[&str; 7]; 7] = [");
    for row in r.to_rows() {
        let cells: Vec<String> = row.iter().map(|s| format!("\"{s}\"")).collect();
        println!("    [{}],", cells.join(", "));
    }
    println!("];");
}
