use std::fmt::Write as _;
use std::path::Path;

use fermisim_core::compiler::{compile_trotter_step, count_report};
use fermisim_core::jw::jw_hamiltonian;
use fermisim_core::oracle::{fock_spectrum, DEFAULT_CLUSTER_TOL};
use fermisim_core::phase_estimation::{default_scan_shifts, run_phase_estimation, spectrum_scan, PeakThreshold};
use fermisim_core::GateSequence;
use serde_json::json;

use crate::config::LoadedConfig;
use crate::{write_file, CliError};

const MAX_EXACT_LEVELS: usize = 12;

fn hash_line(loaded: &LoadedConfig) -> String {
    format!("# config-hash: {}\n", loaded.hash)
}

pub fn compile(loaded: &LoadedConfig, out: &Path) -> Result<(), CliError> {
    let cfg = &loaded.config;
    let h = cfg.model.build()?;
    let p = jw_hamiltonian(&h)?;
    let step = compile_trotter_step(&p, cfg.compile.dt / cfg.compile.intervals as f64, cfg.trotter_order()?)?;
    let mut seq = GateSequence::new(p.n_qubits());
    for _ in 0..cfg.compile.intervals {
        seq.extend(&step)?;
    }
    let text = format!("{}{}", hash_line(loaded), seq.to_text());
    let path = write_file(out, "gates.txt", &text)?;
    let c = seq.counts();
    println!(
        "{}: {} gates, {} two-qubit (ZZ {}, controlled {}), {} single-qubit",
        path.display(),
        seq.len(),
        c.two_qubit(),
        c.zz,
        c.controlled_rz + c.controlled_phase,
        c.single_qubit
    );
    Ok(())
}

pub fn phase_est(loaded: &LoadedConfig, out: &Path) -> Result<(), CliError> {
    let cfg = &loaded.config;
    let h = cfg.model.build()?;
    let pe = cfg.pe_config(&h)?;
    let hist = run_phase_estimation(&h, &pe)?;
    let csv = format!("{}{}", hash_line(loaded), hist.to_csv(cfg.output.dense));
    let path = write_file(out, "histogram.csv", &csv)?;
    let peaks = hist.peaks(PeakThreshold::default());
    let meta = json!({
        "config_hash": loaded.hash,
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "phase_estimation": pe,
        "bin_width": pe.bin_width(),
        "peaks": peaks,
    });
    write_file(out, "histogram.json", &(serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n"))?;
    println!("{}: {} shots, {} peaks", path.display(), pe.shots, peaks.len());
    for p in &peaks {
        println!("  E = {:.6}  p = {:.4}", p.energy, p.probability);
    }
    Ok(())
}

pub fn exact(loaded: &LoadedConfig, out: &Path) -> Result<(), CliError> {
    let h = loaded.config.model.build()?;
    if h.n_levels() > MAX_EXACT_LEVELS {
        return Err(fermisim_core::Error::Resource(format!(
            "exact diagonalization is limited to {MAX_EXACT_LEVELS} levels, model has {}",
            h.n_levels()
        ))
        .into());
    }
    let levels = fock_spectrum(&h, DEFAULT_CLUSTER_TOL)?.levels();
    let mut csv = hash_line(loaded);
    csv.push_str("energy,degeneracy\n");
    for l in &levels {
        let _ = writeln!(csv, "{},{}", l.energy, l.degeneracy);
    }
    let path = write_file(out, "eigenvalues.csv", &csv)?;
    println!("{}: {} distinct levels", path.display(), levels.len());
    Ok(())
}

pub fn scan(loaded: &LoadedConfig, out: &Path) -> Result<(), CliError> {
    let cfg = &loaded.config;
    let h = cfg.model.build()?;
    let pe = cfg.pe_config(&h)?;
    let shifts = cfg.scan.as_ref().and_then(|s| s.dt_shifts.clone()).unwrap_or_else(|| default_scan_shifts(pe.dt));
    let report = spectrum_scan(&h, &pe, &shifts, PeakThreshold::default())?;
    let mut csv = hash_line(loaded);
    csv.push_str("energy,probability,aliased");
    for k in 1..=shifts.len() {
        let _ = write!(csv, ",shifted_energy_{k}");
    }
    csv.push('\n');
    for p in &report {
        let _ = write!(csv, "{},{},{}", p.energy, p.probability, p.aliased);
        for e in &p.shifted_energies {
            match e {
                Some(e) => {
                    let _ = write!(csv, ",{e}");
                }
                None => csv.push(','),
            }
        }
        csv.push('\n');
        println!("  E = {:.6}  {}", p.energy, if p.aliased { "aliased" } else { "true" });
    }
    let path = write_file(out, "scan.csv", &csv)?;
    println!("{}: {} peaks, {} aliased", path.display(), report.len(), report.iter().filter(|p| p.aliased).count());
    Ok(())
}

pub fn gate_count(loaded: &LoadedConfig, out: &Path) -> Result<(), CliError> {
    let cfg = &loaded.config;
    let sizes = &cfg
        .gate_count
        .as_ref()
        .ok_or_else(|| CliError::Config("missing gate_count section".into()))?
        .qubits;
    let mut csv = hash_line(loaded);
    csv.push_str("qubits,two_qubit,single_qubit,native\n");
    println!("{:>6} {:>10} {:>12} {:>8}", "qubits", "two-qubit", "single-qubit", "native");
    for &s in sizes {
        let h = cfg.model.with_qubits(s)?.build()?;
        let c = count_report(&h, cfg.compile.dt)?;
        let _ = writeln!(csv, "{s},{},{},{}", c.two_qubit(), c.single_qubit, c.native());
        println!("{s:>6} {:>10} {:>12} {:>8}", c.two_qubit(), c.single_qubit, c.native());
    }
    write_file(out, "gate_counts.csv", &csv)?;
    Ok(())
}
