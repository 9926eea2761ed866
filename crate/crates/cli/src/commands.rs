use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use wrl_core::capacity::{rate_curve, upper_concave_envelope};
use wrl_core::info::{is_less_capable, LessCapable};
use wrl_core::jamming::{self, JammingScenario, FORMULA_DISCREPANCY_THRESHOLD};
use wrl_core::randomness::biased_example_source;
use wrl_core::sim::{
    estimate_pe, exact_leakage, mean_and_halfwidth, CodeParams, Decoder, Ensemble, SimulationRow, SIMULATION_CSV_HEADER,
};
use wrl_core::{build_extractor, secrecy_capacity, BiasedSource, Distribution, Limits, RandomnessSource};

use crate::error::{CliError, Result};
use crate::spec::{load_channel, load_source, BiasedExample, ChannelSpec, SourceSpec};

/// Resolution of the input grid used for the less-capable warning.
const LESS_CAPABLE_GRID: usize = 50;

pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub diag: &'a mut dyn Write,
    pub limits: Limits,
}

fn fmt_dist(d: &Distribution) -> String {
    d.probs().iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

fn channel_label(spec: &ChannelSpec, path: &Path) -> String {
    spec.name.clone().unwrap_or_else(|| path.display().to_string())
}

fn warn_if_not_less_capable(spec: &ChannelSpec, diag: &mut dyn Write) -> Result<()> {
    if let LessCapable::Violated { gap, witness } = is_less_capable(&spec.channel, LESS_CAPABLE_GRID)? {
        writeln!(
            diag,
            "warning: eavesdropper channel is not less capable: I(X;Z) - I(X;Y) = {gap} at p_X = [{}]; \
             the reported rate is the rate-curve optimum, not a proven capacity",
            fmt_dist(&witness)
        )?;
    }
    Ok(())
}

pub fn capacity(channel: &Path, budget: f64, grid: usize, io: &mut Io) -> Result<()> {
    let spec = load_channel(channel)?;
    warn_if_not_less_capable(&spec, io.diag)?;
    let r = secrecy_capacity(&spec.channel, budget, grid)?;
    writeln!(
        io.out,
        "budget,rate,lambda,p_x_given_u0,p_x_given_u1,randomness_used,constraint_active"
    )?;
    writeln!(
        io.out,
        "{},{},{},{},{},{},{}",
        budget,
        r.rate,
        r.lambda,
        fmt_dist(&r.inputs[0]),
        fmt_dist(&r.inputs[1]),
        r.randomness_used,
        r.constraint_active
    )?;
    let d = &mut *io.diag;
    writeln!(d, "channel: {}", channel_label(&spec, channel))?;
    writeln!(d, "secrecy rate: {} bits/use (grid {grid})", r.rate)?;
    writeln!(d, "time sharing: P(U=0) = {}", r.lambda)?;
    writeln!(d, "p_X|U=0: [{}]", fmt_dist(&r.inputs[0]))?;
    writeln!(d, "p_X|U=1: [{}]", fmt_dist(&r.inputs[1]))?;
    writeln!(d, "randomness used: {} of {} bits/use", r.randomness_used, budget)?;
    writeln!(d, "constraint active: {}", r.constraint_active)?;
    Ok(())
}

pub fn curve(channel: &Path, grid: usize, io: &mut Io) -> Result<()> {
    let spec = load_channel(channel)?;
    warn_if_not_less_capable(&spec, io.diag)?;
    let points = rate_curve(&spec.channel, grid)?;
    let env = upper_concave_envelope(&points)?;
    writeln!(io.out, "cost_bits,gain_bits,on_envelope")?;
    for p in &points {
        let on = env.vertices().iter().any(|v| v.input == p.input);
        writeln!(io.out, "{},{},{}", p.randomness_cost, p.secrecy_gain, on)?;
    }
    writeln!(
        io.diag,
        "{} curve points, {} envelope vertices",
        points.len(),
        env.vertices().len()
    )?;
    Ok(())
}

/// Where the randomization index comes from in `simulate`.
pub enum Randomizer {
    Uniform,
    File(PathBuf),
}

pub struct SimulateArgs {
    pub channel: PathBuf,
    pub source: Randomizer,
    pub block_lengths: Vec<usize>,
    pub rates: [f64; 3],
    pub codebooks: usize,
    pub seed: u64,
    pub decoder: Decoder,
    pub trials: u64,
    pub input: Option<Vec<f64>>,
}

enum LoadedRandomizer {
    Uniform,
    Extracted(RandomnessSource),
    Biased(BiasedExample),
}

fn randomizer_law(source: &LoadedRandomizer, params: &CodeParams, limits: &Limits) -> Result<Distribution> {
    let n = params.n;
    match source {
        LoadedRandomizer::Uniform => Ok(Distribution::uniform(params.k_r)?),
        LoadedRandomizer::Extracted(src) => {
            let ex = build_extractor(src, n, params.r_r, limits)?;
            Ok(ex.output_distribution(src)?)
        }
        LoadedRandomizer::Biased(b) => {
            let size = 1usize << BiasedSource::new(n, b.alpha, b.rate)?.size_bits();
            if size != params.k_r {
                return Err(CliError::Usage(format!(
                    "biased source with R = {} has {size} values at n = {n}, but Rr = {} gives K_r = {}",
                    b.rate, params.r_r, params.k_r
                )));
            }
            Ok(biased_example_source(n, b.alpha, b.rate, limits)?)
        }
    }
}

pub fn simulate(args: &SimulateArgs, io: &mut Io) -> Result<()> {
    let spec = load_channel(&args.channel)?;
    let ch = &spec.channel;
    let [r0, r, rr] = args.rates;

    let mut block_lengths = args.block_lengths.clone();
    let source = match &args.source {
        Randomizer::Uniform => LoadedRandomizer::Uniform,
        Randomizer::File(path) => match load_source(path)? {
            SourceSpec::Explicit(d) => {
                let src = RandomnessSource::new(d);
                if rr >= src.entropy() {
                    writeln!(
                        io.diag,
                        "warning: Rr = {rr} is not below the source entropy {} bits/symbol; \
                         the extractor output will be far from uniform",
                        src.entropy()
                    )?;
                }
                LoadedRandomizer::Extracted(src)
            }
            SourceSpec::Biased(b) => {
                match (b.n, block_lengths.is_empty()) {
                    (Some(n), true) => block_lengths.push(n),
                    (Some(n), false) if block_lengths != [n] => {
                        writeln!(io.diag, "warning: --n overrides n = {n} from {}", path.display())?
                    }
                    _ => {}
                }
                LoadedRandomizer::Biased(b)
            }
        },
    };
    if block_lengths.is_empty() {
        return Err(CliError::Usage("--n is required".into()));
    }

    let p_u = Distribution::point_mass(1, 0)?;
    let p_x = match &args.input {
        Some(w) if w.len() != ch.nx() => {
            return Err(CliError::Usage(format!(
                "--input has {} entries, the channel has {} inputs",
                w.len(),
                ch.nx()
            )))
        }
        Some(w) => Distribution::new(w.clone())?,
        None => Distribution::uniform(ch.nx())?,
    };
    let p_x = [p_x];
    let ensemble = Ensemble {
        channel: ch,
        p_u: &p_u,
        p_x_given_u: &p_x,
    };

    writeln!(io.out, "{SIMULATION_CSV_HEADER}")?;
    for &n in &block_lengths {
        let params = CodeParams::from_rates(n, r0, r, rr, args.seed)?;
        let p_ur = randomizer_law(&source, &params, &io.limits)?;
        io.limits.check_enumeration("eavesdropper outputs |Z|^n", ch.nz(), n)?;
        let limits = io.limits;
        let outcomes = (0..args.codebooks as u64)
            .into_par_iter()
            .map(|c| {
                let code = ensemble.codebook(&params, c, &limits)?;
                let leak = exact_leakage(&code, &p_ur, &limits)?;
                let pe = estimate_pe(&code, &p_ur, args.decoder, args.trials, code.params().seed, &limits)?;
                Ok((code.params().seed, leak, pe))
            })
            .collect::<wrl_core::Result<Vec<_>>>()?;

        let row = |seed, codebooks, vd, vd_ci, leak, pe, pe_ci| SimulationRow {
            n,
            r0: params.r0,
            r: params.r,
            r_r: params.r_r,
            renyi2_rate: p_ur.renyi2() / n as f64,
            entropy_rate: p_ur.entropy() / n as f64,
            seed,
            codebooks,
            mean_vd: vd,
            ci_halfwidth: vd_ci,
            mean_leakage_bits: leak,
            pe,
            pe_ci,
        };
        for (seed, leak, pe) in &outcomes {
            let r = row(*seed, 1, leak.vd, 0.0, leak.leakage_bits, pe.pe, pe.ci_halfwidth());
            writeln!(io.out, "{}", r.to_csv())?;
        }
        let column = |f: &dyn Fn(&(u64, wrl_core::sim::LeakageReport, wrl_core::sim::PeEstimate)) -> f64| {
            mean_and_halfwidth(&outcomes.iter().map(f).collect::<Vec<_>>())
        };
        let (vd, vd_ci) = column(&|o| o.1.vd);
        let (leak, _) = column(&|o| o.1.leakage_bits);
        let (pe, pe_ci) = column(&|o| o.2.pe);
        let summary = row(args.seed, args.codebooks, vd, vd_ci, leak, pe, pe_ci);
        writeln!(io.out, "{}", summary.to_csv())?;
        writeln!(
            io.diag,
            "n={n}: M0={} M={} K_r={} mean vd {vd} ± {vd_ci}, mean leakage {leak} bits, pe {pe}",
            params.m0, params.m, params.k_r
        )?;
    }
    Ok(())
}

pub fn uniformize(source: &Path, n: usize, rr: f64, export: Option<&Path>, io: &mut Io) -> Result<()> {
    let law = match load_source(source)? {
        SourceSpec::Explicit(d) => d,
        SourceSpec::Biased(b) => {
            let block = b.n.ok_or_else(|| {
                CliError::Usage("a [biased_example] source needs `n` to be used as a symbol law".into())
            })?;
            biased_example_source(block, b.alpha, b.rate, &io.limits)?
        }
    };
    let src = RandomnessSource::new(law);
    let h = src.entropy();
    if rr >= h {
        writeln!(
            io.diag,
            "warning: rr = {rr} is not below the source entropy H(R) = {h} bits/symbol; \
             proceeding, expect a large distance"
        )?;
    }
    let ex = build_extractor(&src, n, rr, &io.limits)?;
    writeln!(io.out, "n,K,rr,entropy_bits,distance")?;
    writeln!(
        io.out,
        "{},{},{},{},{}",
        n,
        ex.num_bins(),
        rr,
        h,
        ex.achieved_distance()
    )?;
    if let Some(path) = export {
        let file = std::fs::File::create(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut w = std::io::BufWriter::new(file);
        ex.write_to(&mut w)?;
        w.flush()?;
        writeln!(io.diag, "extractor written to {}", path.display())?;
    }
    Ok(())
}

/// `--simulate n,rate,samples,seed`.
#[derive(Debug, Clone, Copy)]
pub struct JammingSimSpec {
    pub n: usize,
    pub rate: f64,
    pub samples: usize,
    pub seed: u64,
}

pub fn jamming_cmd(sigma2: f64, h_r: f64, sim: Option<JammingSimSpec>, io: &mut Io) -> Result<()> {
    let s = JammingScenario::new(sigma2, h_r)?;
    writeln!(io.out, "{}", jamming::BOUND_CSV_HEADER)?;
    writeln!(io.out, "{}", s.to_csv())?;
    let alt = s.alternative_bound();
    let gap = s.formula_discrepancy();
    if gap > FORMULA_DISCREPANCY_THRESHOLD {
        writeln!(
            io.diag,
            "note: sigma2*(2^(2H)-1) = {} differs from sigma2*2^(2H-1) = {alt} by {:.2}%; \
             rho_max uses the first, obtained by inverting 1/2 log2(1 + rho/sigma2) = H",
            s.rho_max,
            100.0 * gap
        )?;
    } else {
        writeln!(
            io.diag,
            "note: sigma2*(2^(2H)-1) = {} and sigma2*2^(2H-1) = {alt} agree within 1%",
            s.rho_max
        )?;
    }
    if let Some(sim) = sim {
        let r = jamming::simulate_jamming(sigma2, s.rho_max, sim.n, sim.rate, sim.samples, sim.seed, &io.limits)?;
        writeln!(io.out)?;
        writeln!(io.out, "{}", jamming::SIMULATION_CSV_HEADER)?;
        writeln!(io.out, "{}", r.to_csv())?;
        writeln!(
            io.diag,
            "{} codewords; 5% KS critical value {}",
            r.codewords,
            jamming::ks_critical_value_5pct(sim.samples, sim.samples)
        )?;
    }
    Ok(())
}
