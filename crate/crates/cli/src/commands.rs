use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use cbrn_core::memory::cue_error;
use cbrn_core::{
    encode_label, load_catalog, load_pbm, reconstruct, render, save_pbm, store, to_vector,
    AttributeCatalog, MemorySystem, NeuronRef, Normalization, PatternProvider, SystemConfig,
};

use crate::config::ConfigFile;
use crate::table::{real, Format, Table};
use crate::{
    AssociateArgs, CliError, EncodeArgs, PairArgs, ProviderKind, RecallArgs, ReportArgs, TrainArgs,
};

/// Probe neurons used by `report --figure 3` for the first three balls.
const DEFAULT_PROBES: [usize; 3] = [0, 3, 6];

fn optional<T: FromStr>(
    cli: Option<T>,
    config: &ConfigFile,
    key: &str,
) -> Result<Option<T>, CliError> {
    match cli {
        Some(v) => Ok(Some(v)),
        None => config.parsed(key),
    }
}

fn required<T: FromStr>(cli: Option<T>, config: &ConfigFile, key: &str) -> Result<T, CliError> {
    optional(cli, config, key)?.ok_or_else(|| CliError::usage(format!("missing required --{key}")))
}

fn repeated(cli: Vec<String>, config: &ConfigFile, key: &str) -> Vec<String> {
    if cli.is_empty() {
        config.get_all(key)
    } else {
        cli
    }
}

/// Parses `ball:index` against the model's balls.
fn neuron_ref(system: &MemorySystem, spec: &str) -> Result<NeuronRef, CliError> {
    let (ball, index) = spec
        .rsplit_once(':')
        .ok_or_else(|| CliError::usage(format!("expected ball:index, got {spec:?}")))?;
    let index: usize = index
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("invalid neuron index in {spec:?}")))?;
    Ok(system.neuron_ref(ball.trim(), index)?)
}

fn label_of(system: &MemorySystem, r: NeuronRef) -> &str {
    system.balls()[r.ball].labels[r.neuron].as_str()
}

pub fn encode(args: EncodeArgs, config: &ConfigFile) -> Result<String, CliError> {
    let label: String = required(args.label, config, "label")?;
    let out: PathBuf = required(args.out, config, "out")?;
    let scale = optional(args.scale, config, "scale")?.unwrap_or(cbrn_core::qr::DEFAULT_SCALE);
    let matrix = encode_label(&label)?;
    let pattern = render(&matrix, scale)?;
    save_pbm(&pattern, &out)?;
    Ok(format!(
        "encoded {label:?}: version {} mask {} -> {}x{} {}\n",
        matrix.version(),
        matrix.mask(),
        pattern.width(),
        pattern.height(),
        out.display()
    ))
}

pub fn train(args: TrainArgs, config: &ConfigFile, format: Format) -> Result<String, CliError> {
    let out: PathBuf = required(args.out, config, "out")?;
    let provider = match (args.provider, config.get("provider")) {
        (Some(kind), _) => kind,
        (None, None | Some("qr")) => ProviderKind::Qr,
        (None, Some("random")) => ProviderKind::Random,
        (None, Some(other)) => return Err(CliError::usage(format!("unknown provider {other:?}"))),
    };
    let provider = match provider {
        ProviderKind::Qr => PatternProvider::Qr,
        ProviderKind::Random => PatternProvider::SeededRandom {
            seed: optional(args.seed, config, "seed")?.unwrap_or(0),
        },
    };

    let resume: Option<PathBuf> = optional(args.resume, config, "resume")?;
    let mut system = match resume {
        Some(path) => {
            let mut system = store::load(&path)?;
            if let Some(epochs) = optional(args.epochs, config, "epochs")? {
                system.config_mut().epochs = epochs;
                system.config().validate()?;
            }
            system
        }
        None => {
            let catalog = match optional(args.catalog, config, "catalog")? {
                Some(path) => load_catalog(path)?,
                None => AttributeCatalog::bundled(),
            };
            if catalog.pattern_count() == 0 {
                return Err(CliError::usage("catalog has no patterns"));
            }
            let defaults = SystemConfig::default();
            let unnormalized = args.unnormalized || config.flag("unnormalized")?;
            let cfg = SystemConfig {
                theta: optional(args.theta, config, "theta")?.unwrap_or(defaults.theta),
                threshold: optional(args.threshold, config, "threshold")?
                    .unwrap_or(defaults.threshold),
                eps_w: optional(args.eps_w, config, "eps-w")?.unwrap_or(defaults.eps_w),
                eps_v: optional(args.eps_v, config, "eps-v")?.unwrap_or(defaults.eps_v),
                lambda_cb: optional(args.lambda_cb, config, "lambda-cb")?
                    .unwrap_or(defaults.lambda_cb),
                epochs: optional(args.epochs, config, "epochs")?.unwrap_or(defaults.epochs),
                normalization: if unnormalized {
                    Normalization::Raw
                } else {
                    Normalization::L2
                },
                ..defaults
            };
            MemorySystem::new(cfg, &catalog)?
        }
    };

    let reports = system.train_all(&provider)?;
    store::save(&system, &out)?;

    let mut table = Table::new(["ball", "neuron", "label", "E", "e"]);
    for r in &reports {
        table.push(vec![
            system.balls()[r.target.ball].id().to_string(),
            r.target.neuron.to_string(),
            label_of(&system, r.target).to_string(),
            format!("{:.3e}", r.recall.final_error()),
            format!("{:.3e}", r.cue.final_error()),
        ]);
    }
    let mut text = table.render(format);
    if format == Format::Table {
        let _ = writeln!(
            text,
            "stored {} patterns in {} balls -> {}",
            reports.len(),
            system.balls().len(),
            out.display()
        );
    }
    Ok(text)
}

pub fn pair(args: PairArgs, config: &ConfigFile, format: Format) -> Result<String, CliError> {
    let model: PathBuf = required(args.model, config, "model")?;
    let pairs = repeated(args.pairs, config, "pair");
    if pairs.is_empty() {
        return Err(CliError::usage("at least one --pair is required"));
    }
    let out = optional(args.out, config, "out")?.unwrap_or_else(|| model.clone());
    let mut system = store::load(&model)?;

    let mut parsed = Vec::with_capacity(pairs.len());
    for spec in &pairs {
        let (a, b) = spec
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("expected ball:i=ball:j, got {spec:?}")))?;
        parsed.push((neuron_ref(&system, a)?, neuron_ref(&system, b)?));
    }

    let mut table = Table::new(["from", "to", "eta_before", "eta_after", "u"]);
    for (a, b) in parsed {
        let report = system.learn_cross(a, b)?;
        for (from, to, r) in [(a, b, &report.forward), (b, a, &report.backward)] {
            table.push(vec![
                system.describe(from),
                system.describe(to),
                real(r.initial_error),
                real(r.final_error()),
                real(system.links().weight(from, to)),
            ]);
        }
    }
    store::save(&system, &out)?;
    let mut text = table.render(format);
    if format == Format::Table {
        let _ = writeln!(
            text,
            "{} directed links -> {}",
            system.links().len(),
            out.display()
        );
    }
    Ok(text)
}

fn load_probe(system: &MemorySystem, path: &PathBuf) -> Result<cbrn_core::PatternVector, CliError> {
    let cfg = system.config();
    let bits = load_pbm(path, cfg.width, cfg.height)?;
    Ok(to_vector(&bits, cfg.normalization)?)
}

fn fired_list(fired: &[usize]) -> String {
    if fired.is_empty() {
        "none".to_string()
    } else {
        fired
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn recall(args: RecallArgs, config: &ConfigFile, format: Format) -> Result<String, CliError> {
    let model: PathBuf = required(args.model, config, "model")?;
    let ball_name: String = required(args.ball, config, "ball")?;
    let pattern: PathBuf = required(args.pattern, config, "pattern")?;
    let out: Option<PathBuf> = optional(args.out, config, "out")?;
    let system = store::load(&model)?;
    let threshold =
        optional(args.threshold, config, "threshold")?.unwrap_or(system.config().threshold);
    let ball = system.ball_index(&ball_name)?;
    let probe = load_probe(&system, &pattern)?;
    let resp = system.cue_response_at(ball, &probe, threshold)?;

    let mut table = Table::new(["neuron", "label", "q", "fired"]);
    for (i, q) in resp.q.iter().enumerate() {
        table.push(vec![
            i.to_string(),
            system.balls()[ball].labels[i].clone(),
            real(*q),
            u8::from(resp.is_fired(i)).to_string(),
        ]);
    }
    let mut text = table.render(format);
    if format == Format::Table {
        let _ = writeln!(
            text,
            "argmax: {} ({})\nfired (D = {}): {}",
            resp.argmax,
            system.balls()[ball].labels[resp.argmax],
            threshold,
            fired_list(&resp.fired)
        );
    }
    if let Some(out) = out {
        if !resp.is_fired(resp.argmax) {
            return Err(cbrn_core::Error::NoRecognition {
                ball: system.balls()[ball].id().to_string(),
                max_q: resp.max_q(),
                threshold,
            }
            .into());
        }
        let y = system.recall(NeuronRef::new(ball, resp.argmax))?;
        let cfg = system.config();
        save_pbm(&reconstruct(&y, cfg.width, cfg.height)?, &out)?;
        if format == Format::Table {
            let _ = writeln!(text, "recalled pattern -> {}", out.display());
        }
    }
    Ok(text)
}

pub fn associate(
    args: AssociateArgs,
    config: &ConfigFile,
    format: Format,
) -> Result<String, CliError> {
    let model: PathBuf = required(args.model, config, "model")?;
    let from: String = required(args.from, config, "from")?;
    let to: String = required(args.to, config, "to")?;
    let pattern: PathBuf = required(args.pattern, config, "pattern")?;
    let out: Option<PathBuf> = optional(args.out, config, "out")?;
    let system = store::load(&model)?;
    let from = system.ball_index(&from)?;
    let to = system.ball_index(&to)?;
    let probe = load_probe(&system, &pattern)?;
    let assoc = system.associate(from, &probe, to)?;

    let mut table = Table::new(["stage", "neuron", "label", "q"]);
    table.push(vec![
        system.balls()[from].id().to_string(),
        assoc.source.neuron.to_string(),
        label_of(&system, assoc.source).to_string(),
        real(assoc.source_q),
    ]);
    table.push(vec![
        system.balls()[to].id().to_string(),
        assoc.target.neuron.to_string(),
        label_of(&system, assoc.target).to_string(),
        real(assoc.target_q),
    ]);
    let mut text = table.render(format);
    if let Some(out) = out {
        let cfg = system.config();
        save_pbm(&reconstruct(&assoc.recalled, cfg.width, cfg.height)?, &out)?;
        if format == Format::Table {
            let _ = writeln!(text, "recalled pattern -> {}", out.display());
        }
    }
    Ok(text)
}

fn q_columns(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

pub fn report(args: ReportArgs, config: &ConfigFile, format: Format) -> Result<String, CliError> {
    let model: PathBuf = required(args.model, config, "model")?;
    let figure: u8 = required(args.figure, config, "figure")?;
    let system = store::load(&model)?;
    let width = system
        .balls()
        .iter()
        .map(|b| b.neurons())
        .max()
        .unwrap_or(0);

    let mut probes: Vec<usize> = system
        .balls()
        .iter()
        .enumerate()
        .map(|(b, ball)| {
            DEFAULT_PROBES
                .get(b)
                .copied()
                .unwrap_or(0)
                .min(ball.neurons() - 1)
        })
        .collect();
    for spec in repeated(args.probes, config, "probe") {
        let r = neuron_ref(&system, &spec)?;
        probes[r.ball] = r.neuron;
    }

    match figure {
        3 => {
            let mut headers = vec!["ball".to_string(), "probe".to_string()];
            headers.extend(q_columns(width));
            headers.extend(["argmax".to_string(), "fired".to_string()]);
            let mut table = Table::new(headers);
            for (b, ball) in system.balls().iter().enumerate() {
                let y = system.recall(NeuronRef::new(b, probes[b]))?;
                let resp = system.cue_response(b, &y)?;
                let mut row = vec![ball.id().to_string(), probes[b].to_string()];
                row.extend((0..width).map(|i| resp.q.get(i).map(|&q| real(q)).unwrap_or_default()));
                row.push(resp.argmax.to_string());
                row.push(fired_list(&resp.fired));
                table.push(row);
            }
            let mut text = table.render(format);
            if format == Format::Table {
                let _ = writeln!(
                    text,
                    "theta = {}, D = {}; e over each row = {}",
                    system.config().theta,
                    system.config().threshold,
                    system
                        .balls()
                        .iter()
                        .enumerate()
                        .map(|(b, _)| {
                            let y = system.recall(NeuronRef::new(b, probes[b]))?;
                            let q = system.cue_response(b, &y)?.q;
                            Ok(real(cue_error(system.config().theta, &q)))
                        })
                        .collect::<Result<Vec<_>, cbrn_core::Error>>()?
                        .join(" / ")
                );
            }
            Ok(text)
        }
        4 => {
            let mut rows: BTreeSet<(NeuronRef, usize)> = system
                .links()
                .iter()
                .map(|(from, to, _)| (from, to.ball))
                .collect();
            if rows.is_empty() && system.balls().len() > 1 {
                let n = system.balls().len();
                rows = (0..n)
                    .map(|b| (NeuronRef::new(b, probes[b]), (b + 1) % n))
                    .collect();
            }
            let mut headers = vec!["from".to_string(), "to".to_string()];
            headers.extend(q_columns(width));
            headers.push("fired".to_string());
            let mut table = Table::new(headers);
            for (from, to) in rows {
                let resp = system.cross_response(from, to)?;
                let mut row = vec![system.describe(from), system.balls()[to].id().to_string()];
                row.extend((0..width).map(|i| resp.q.get(i).map(|&q| real(q)).unwrap_or_default()));
                row.push(fired_list(&resp.fired));
                table.push(row);
            }
            let mut text = table.render(format);
            if format == Format::Table {
                let _ = writeln!(
                    text,
                    "note: a trained link settles at exactly theta = {} after one update; untrained targets stay at 0",
                    system.config().theta
                );
            }
            Ok(text)
        }
        other => Err(CliError::usage(format!(
            "unknown figure {other}; expected 3 or 4"
        ))),
    }
}
