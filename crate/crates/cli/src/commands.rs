use crate::meta::{meta_path, Run};
use crate::{usage, AnnCommand, Block, BridgeCommand, DeviceSweepArgs, KernelArgs, Mode, PoolArgs, PoolKindArg, SweepArgs};
use anyhow::{Context, Result};
use memristive::blocks::{
    bridge_weight, divider, max_pool_block, multiplier, plan_weight, relu, squarer, tanh_block_structural, tanh_seed,
    BlockNonideality, BridgeSynapse, DEFAULT_I_REF, WEIGHT_TOLERANCE,
};
use memristive::device::{simulate_drive, simulate_fn, DeviceParams, MemristorState, Waveform, DEFAULT_DT};
use memristive::formats::csv::read_csv_trace;
use memristive::formats::model::{read_model, write_model};
use memristive::formats::num::fmt_f64;
use memristive::formats::pgm::{read_pgm, write_pgm};
use memristive::formats::profile::ParameterProfile;
use memristive::formats::pwl::read_pwl;
use memristive::nn::{accuracy, confusion, train_report, Activation, Dataset, NetMode, NetworkSpec, TrainConfig};
use memristive::vision::{pool_image, run_kernel, ImageGrid, KernelSpec, PixelVoltageMap, PoolKind, Realization};
use memristive::Error;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const DEFAULT_PROFILE: &str = "hp-linear";
const DATASET_URL: &str =
    "https://archive.ics.uci.edu/ml/machine-learning-databases/breast-cancer-wisconsin/breast-cancer-wisconsin.data";

/// Built-in name or profile file path; falls back to the linear-drift default.
fn load_profile(arg: Option<&str>) -> Result<(String, DeviceParams)> {
    let name = arg.unwrap_or(DEFAULT_PROFILE);
    if let Some(p) = DeviceParams::builtin(name) {
        return Ok((name.to_string(), p));
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(usage(format!(
            "profile `{name}` is neither a file nor a built-in ({})",
            DeviceParams::BUILTIN_NAMES.join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading profile {name}"))?;
    let profile = ParameterProfile::parse(&text).with_context(|| format!("profile {name}"))?;
    let params = DeviceParams::from_profile(&profile).with_context(|| format!("profile {name}"))?;
    Ok((name.to_string(), params))
}

fn write_output(path: &Path, bytes: impl AsRef<[u8]>, run: &mut Run) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    run.outputs.push(path.to_path_buf());
    Ok(())
}

/// Writes `<primary>.meta.json`, or prints the metadata to stderr when the
/// command produced no file.
fn finish(run: Run, primary: Option<&Path>) -> Result<()> {
    let meta = run.finish();
    let json = serde_json::to_string_pretty(&meta)?;
    match primary {
        Some(p) => {
            let path = meta_path(p);
            std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
        }
        None => eprintln!("{}", serde_json::to_string(&meta)?),
    }
    Ok(())
}

fn parse_waveform(spec: &str) -> Result<Waveform> {
    let mut parts = spec.split(':');
    let kind = parts.next().unwrap_or_default();
    let nums: Vec<f64> = parts
        .map(|s| s.parse::<f64>().map_err(|_| usage(format!("`{s}` in waveform `{spec}` is not a number"))))
        .collect::<Result<_>>()?;
    match (kind, nums.as_slice()) {
        ("sine", [amplitude, frequency]) => Ok(Waveform::Sine {
            amplitude: *amplitude,
            frequency: *frequency,
        }),
        ("pulses", [amplitude, width, period]) => Ok(Waveform::Pulses {
            amplitude: *amplitude,
            width: *width,
            period: *period,
        }),
        ("dc", [level]) => Ok(Waveform::Dc { level: *level }),
        _ => Err(usage(format!(
            "waveform `{spec}` must be sine:AMP:FREQ, pulses:AMP:WIDTH:PERIOD or dc:LEVEL"
        ))),
    }
}

pub fn device_sweep(profile: Option<&str>, args: &DeviceSweepArgs) -> Result<()> {
    let mut run = Run::start();
    let (name, params) = load_profile(profile)?;
    run.profile = Some(name);
    if !(0.0..=1.0).contains(&args.x0) {
        return Err(usage(format!("--x0 must lie in [0, 1], got {}", args.x0)));
    }
    let (lo, hi) = params.state_range();
    let x0 = lo + args.x0 * (hi - lo);
    let trace = match &args.drive {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let drive = if path.extension().is_some_and(|e| e == "csv") {
                read_csv_trace(&text)
            } else {
                read_pwl(&text)
            }
            .with_context(|| format!("drive {}", path.display()))?;
            simulate_drive(&params, x0, &drive, args.dt)?
        }
        None => {
            let wave = parse_waveform(&args.waveform)?;
            if let Waveform::Pulses { width, period, .. } = wave {
                if !(width > 0.0 && period > width) {
                    return Err(usage("pulse train needs 0 < WIDTH < PERIOD"));
                }
            }
            simulate_fn(&params, MemristorState::new(x0), 0.0, args.duration, args.dt, |t| wave.value(t))?
        }
    };
    write_output(&args.out, trace.to_csv(), &mut run)?;
    finish(run, Some(&args.out))
}

fn parse_states(text: &str) -> Result<[f64; 4]> {
    let xs: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| usage(format!("state `{s}` is not a number"))))
        .collect::<Result<_>>()?;
    xs.try_into().map_err(|_| usage("--states takes four comma-separated values"))
}

fn bridge_report(b: &BridgeSynapse) -> String {
    let m = b.memristances();
    let mut out = String::new();
    for (k, r) in m.iter().enumerate() {
        let _ = writeln!(out, "m{} = {}", k + 1, fmt_f64(*r));
    }
    let _ = writeln!(out, "weight = {}", fmt_f64(bridge_weight(b)));
    out
}

pub fn bridge(profile: Option<&str>, cmd: &BridgeCommand) -> Result<()> {
    let mut run = Run::start();
    let (name, params) = load_profile(profile)?;
    run.profile = Some(name);
    match cmd {
        BridgeCommand::Program {
            target,
            amplitude,
            states,
            out,
        } => {
            let start = match states {
                Some(s) => BridgeSynapse::from_states(params, parse_states(s)?),
                None => BridgeSynapse::balanced(params),
            };
            let plan = plan_weight(&start, *target, *amplitude, DEFAULT_DT)?;
            let end = plan.apply(&start, *amplitude)?;
            let achieved = bridge_weight(&end);
            if (achieved - target).abs() > WEIGHT_TOLERANCE {
                anyhow::bail!("reached weight {achieved}, more than {WEIGHT_TOLERANCE} from {target}");
            }
            let mut report = format!(
                "target = {}\npulse_width = {}\npulse_voltage = {}\n",
                fmt_f64(*target),
                fmt_f64(plan.width.abs()),
                fmt_f64(amplitude.abs() * plan.width.signum()),
            );
            report.push_str(&bridge_report(&end));
            print!("{report}");
            if let Some(out) = out {
                write_output(out, &report, &mut run)?;
            }
            finish(run, out.as_deref())
        }
        BridgeCommand::Read { states } => {
            let x = parse_states(states)?;
            let (lo, hi) = params.state_range();
            if x.iter().any(|v| !(lo..=hi).contains(v)) {
                return Err(usage(format!("states must lie in [{lo}, {hi}]")));
            }
            print!("{}", bridge_report(&BridgeSynapse::from_states(params, x)));
            finish(run, None)
        }
    }
}

fn read_image(path: &Path) -> Result<ImageGrid> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_pgm(&bytes).with_context(|| format!("image {}", path.display()))
}

pub fn kernel(args: &KernelArgs) -> Result<()> {
    let mut run = Run::start();
    let spec = match KernelSpec::named(&args.kernel) {
        Some(k) => k,
        None => KernelSpec::parse_inline(&args.kernel)
            .map_err(|e| usage(format!("kernel `{}` is not a known name: {e}", args.kernel)))?,
    };
    let spec = match args.mode {
        Mode::Ideal => spec,
        Mode::Bridge => spec.with_realization(Realization::BridgeQuantized),
    };
    let map = PixelVoltageMap::new(args.v_full).map_err(|e| usage(e.to_string()))?;
    let img = read_image(&args.input)?;
    let out = run_kernel(&img, &spec, &map)?;
    write_output(&args.out, write_pgm(&out), &mut run)?;
    finish(run, Some(&args.out))
}

pub fn pool(args: &PoolArgs) -> Result<()> {
    let mut run = Run::start();
    let map = PixelVoltageMap::new(args.v_full).map_err(|e| usage(e.to_string()))?;
    let kind = match args.kind {
        PoolKindArg::Max => PoolKind::Max,
        PoolKindArg::Avg => PoolKind::Avg,
    };
    if args.threshold.is_some() && kind == PoolKind::Avg {
        return Err(usage("--threshold applies to max pooling only"));
    }
    let img = read_image(&args.input)?;
    let out = pool_image(&img, args.window, args.stride, kind, args.threshold, &map)?;
    write_output(&args.out, write_pgm(&out), &mut run)?;
    finish(run, Some(&args.out))
}

fn load_dataset(path: &Path, seed: u64) -> Result<Dataset> {
    if !path.exists() {
        anyhow::bail!(
            "dataset {} not found; fetch it with\n  curl -o {} {DATASET_URL}",
            path.display(),
            path.display()
        );
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Dataset::parse_uci(&text).with_context(|| format!("dataset {}", path.display()))?.with_split(seed))
}

fn split_report(net: &NetworkSpec, data: &Dataset) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "mode = {}", net.mode.name());
    for (name, idx) in [
        ("train", &data.split.train),
        ("validation", &data.split.validation),
        ("test", &data.split.test),
    ] {
        let samples = data.subset(idx);
        let acc = accuracy(net, &samples)?;
        let [[bb, bm], [mb, mm]] = confusion(net, &samples)?;
        let _ = writeln!(
            out,
            "{name}: accuracy {acc:.4} of {}; benign->benign {bb}, benign->malignant {bm}, malignant->benign {mb}, malignant->malignant {mm}",
            samples.len()
        );
    }
    Ok(out)
}

fn split_file(data: &Dataset) -> String {
    let line = |name: &str, idx: &[usize]| {
        let mut s = name.to_string();
        for i in idx {
            let _ = write!(s, " {i}");
        }
        s.push('\n');
        s
    };
    let mut out = String::from("# indices into the complete rows of the dataset, in file order\n");
    out.push_str(&line("train", &data.split.train));
    out.push_str(&line("validation", &data.split.validation));
    out.push_str(&line("test", &data.split.test));
    out
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

pub fn ann(profile: Option<&str>, cmd: &AnnCommand) -> Result<()> {
    let mut run = Run::start();
    match cmd {
        AnnCommand::Train {
            dataset,
            seed,
            init_seed,
            activation,
            epochs,
            lr,
            mode,
            out,
        } => {
            run.seed = Some(*seed);
            let act = Activation::from_name(activation)
                .ok_or_else(|| usage(format!("activation `{activation}` is not relu or tanh-pade")))?;
            if *epochs == 0 || !(*lr > 0.0) {
                return Err(usage("--epochs and --lr must be positive"));
            }
            let data = load_dataset(dataset, *seed)?;
            let net = NetworkSpec::init(&[9, 2, 2], act, *init_seed)?;
            let cfg = TrainConfig {
                epochs: *epochs,
                learning_rate: *lr,
                ..TrainConfig::default()
            };
            let mut trained = train_report(&net, &data, &cfg)?.net;
            if *mode == Mode::Bridge {
                let (name, params) = load_profile(profile)?;
                run.profile = Some(name);
                trained = trained.quantize(&params, 1.0)?;
            }
            write_output(out, write_model(&trained)?, &mut run)?;
            write_output(&with_suffix(out, ".split"), split_file(&data), &mut run)?;
            print!("{}", split_report(&trained, &data)?);
            finish(run, Some(out))
        }
        AnnCommand::Eval {
            dataset,
            model,
            seed,
            mode,
            out,
        } => {
            run.seed = Some(*seed);
            let text = std::fs::read_to_string(model).with_context(|| format!("reading {}", model.display()))?;
            let mut net = read_model(&text).with_context(|| format!("model {}", model.display()))?;
            if *mode == Some(Mode::Bridge) && net.mode == NetMode::Float {
                let (name, params) = load_profile(profile)?;
                run.profile = Some(name);
                net = net.quantize(&params, 1.0)?;
            }
            let data = load_dataset(dataset, *seed)?;
            let report = split_report(&net, &data)?;
            print!("{report}");
            if let Some(out) = out {
                write_output(out, &report, &mut run)?;
            }
            finish(run, out.as_deref())
        }
    }
}

/// Default sweep ranges follow the DC sweep settings used for each block.
fn default_range(block: Block) -> (f64, f64, f64) {
    match block {
        Block::Relu => (-1e-3, 1e-3, 1e-5),
        Block::Divider => (1e-5, 1e-3, 1e-5),
        Block::Tanh => (1e-5, 2e-3, 1e-5),
        Block::Squarer | Block::Multiplier => (0.0, 1e-3, 1e-5),
        Block::Maxpool => (0.0, 2.0, 1e-2),
    }
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let mut run = Run::start();
    let (d_from, d_to, d_step) = default_range(args.block);
    let (from, to, step) = (args.from.unwrap_or(d_from), args.to.unwrap_or(d_to), args.step.unwrap_or(d_step));
    if !(step > 0.0 && to >= from && from.is_finite() && to.is_finite()) {
        return Err(usage("sweep needs finite --from <= --to and a positive --step"));
    }
    let nonid = if args.nonideal {
        BlockNonideality::nonideal()
    } else {
        BlockNonideality::ideal()
    };
    let (m, c) = tanh_seed(args.unit);
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    let mut csv = String::from("input,output\n");
    let mut skipped = 0;
    for k in 0..n {
        let x = from + k as f64 * step;
        let y = match args.block {
            Block::Relu => Ok(relu(x, args.ceiling)),
            Block::Tanh => tanh_block_structural(x, m, c, DEFAULT_I_REF, &nonid),
            Block::Squarer => squarer(x, DEFAULT_I_REF, &nonid),
            Block::Divider => divider(x, DEFAULT_I_REF, &nonid),
            Block::Multiplier => multiplier(x, args.other.unwrap_or(DEFAULT_I_REF), DEFAULT_I_REF, &nonid),
            Block::Maxpool => {
                let other = args.other.unwrap_or(0.7);
                max_pool_block(&[other, other, other, x], args.threshold)
            }
        };
        match y {
            Ok(y) => {
                let _ = writeln!(csv, "{},{}", fmt_f64(x), fmt_f64(y));
            }
            Err(Error::OperatingRange(_)) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    if skipped > 0 {
        eprintln!("{skipped} of {n} points fell outside the block's operating range and were left out");
    }
    write_output(&args.out, csv, &mut run)?;
    finish(run, Some(&args.out))
}
