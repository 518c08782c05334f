use hhck::affine::build_curve;
use hhck::job::{
    agreed_curve, run, run_with, AffineGenerator, Backend, Command, CurveGenerator, Format,
    JobError, JobSpec, NuSelection, TagGenerator,
};
use hhck::kernel::KernelSpec;
use hhck::CurvePath;

/// Builds rule 4 whatever rule is asked for. Rules 0 and 4 share their
/// first three quadrant maps and both last maps send the kernel's entry
/// to the same cell, so the curves part one step into the last quadrant.
struct WrongRule;

impl CurveGenerator for WrongRule {
    fn name(&self) -> &str {
        "wrong-rule"
    }

    fn generate(&self, _nu: u8, order: u32, kernel: &KernelSpec) -> Result<CurvePath, JobError> {
        Ok(build_curve(4, order, kernel)?)
    }
}

/// The reversed curve: valid, but different from step 0 on.
struct Reversed;

impl CurveGenerator for Reversed {
    fn name(&self) -> &str {
        "reversed"
    }

    fn generate(&self, nu: u8, order: u32, kernel: &KernelSpec) -> Result<CurvePath, JobError> {
        Ok(build_curve(nu, order, kernel)?.reverse())
    }
}

#[test]
fn mismatching_backend_stops_the_job() {
    let unit = KernelSpec::unit();
    let err = agreed_curve(&[&AffineGenerator, &Reversed], 0, 3, &unit).unwrap_err();
    assert!(matches!(err, JobError::Mismatch { step: 0, .. }));
    assert_eq!(err.exit_code(), 3);

    let job = JobSpec {
        nu: NuSelection::All,
        ..JobSpec::new(Command::Analyze)
    };
    let mut out = Vec::new();
    let err = run_with(&job, &[&AffineGenerator, &Reversed], &mut out).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(out.is_empty(), "nothing is analysed after a mismatch");
}

#[test]
fn mismatch_reports_the_first_differing_step() {
    let unit = KernelSpec::unit();
    match agreed_curve(&[&AffineGenerator, &WrongRule], 0, 3, &unit) {
        Err(JobError::Mismatch {
            step,
            first,
            second,
            ..
        }) => {
            assert_eq!(step, 49);
            assert_eq!((first.as_str(), second.as_str()), ("affine", "wrong-rule"));
        }
        other => panic!("expected a mismatch, got {other:?}"),
    }
}

#[test]
fn both_backends_agree_on_every_rule() {
    for kernel in [KernelSpec::unit(), KernelSpec::mouse(), KernelSpec::frog()] {
        for nu in 0..12 {
            agreed_curve(&[&AffineGenerator, &TagGenerator], nu, 4, &kernel).unwrap();
        }
    }
}

#[test]
fn reproduce_tables_ranks_means() {
    let job = JobSpec {
        kernel: "unit".into(),
        side: 64,
        backend: Backend::Both,
        ..JobSpec::new(Command::ReproduceTables)
    };
    let mut out = Vec::new();
    run(&job, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    let meta: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(meta["convention"], "interior");
    assert_eq!(meta["rows"], 12);
    let means: Vec<f64> = lines
        .map(|l| {
            serde_json::from_str::<serde_json::Value>(l).unwrap()["mean"]
                .as_f64()
                .unwrap()
        })
        .collect();
    assert_eq!(means.len(), 12);
    let argmax = (0..12)
        .max_by(|&a, &b| means[a].total_cmp(&means[b]))
        .unwrap();
    let argmin = (0..12)
        .min_by(|&a, &b| means[a].total_cmp(&means[b]))
        .unwrap();
    assert_eq!(argmax, 2);
    assert!([8, 10].contains(&argmin), "{means:?}");
}

#[test]
fn analysis_of_a_curve_file_matches_generated_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("curve.csv");
    let gen = JobSpec {
        order: 5,
        nu: NuSelection::One(9),
        output: Some(file.clone()),
        ..JobSpec::new(Command::Generate)
    };
    run(&gen, &mut Vec::new()).unwrap();

    let analyse = |input: Option<std::path::PathBuf>| {
        let job = JobSpec {
            order: 5,
            nu: NuSelection::One(9),
            input,
            ..JobSpec::new(Command::Analyze)
        };
        let mut out = Vec::new();
        run(&job, &mut out).unwrap();
        out
    };
    assert_eq!(analyse(Some(file)), analyse(None));
}

#[test]
fn io_failures_exit_with_four() {
    let job = JobSpec {
        output: Some("/nonexistent-dir/x/curve.csv".into()),
        ..JobSpec::new(Command::Generate)
    };
    assert_eq!(run(&job, &mut Vec::new()).unwrap_err().exit_code(), 4);
    let job = JobSpec {
        input: Some("/nonexistent-dir/curve.csv".into()),
        ..JobSpec::new(Command::Analyze)
    };
    assert_eq!(run(&job, &mut Vec::new()).unwrap_err().exit_code(), 4);
}

#[test]
fn pgm_writes_a_companion_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let job = JobSpec {
        order: 4,
        format: Some(Format::Pgm),
        output: Some(dir.path().join("map.pgm")),
        ..JobSpec::new(Command::Diffmap)
    };
    run(&job, &mut Vec::new()).unwrap();
    assert!(std::fs::read(dir.path().join("map.pgm"))
        .unwrap()
        .starts_with(b"P5\n16 16\n"));
    assert!(std::fs::read(dir.path().join("map.ppm"))
        .unwrap()
        .starts_with(b"P6\n16 16\n"));

    let all = JobSpec {
        nu: NuSelection::All,
        output: Some(dir.path().join("all")),
        ..job
    };
    run(&all, &mut Vec::new()).unwrap();
    for nu in 0..12 {
        assert!(dir.path().join(format!("all/nu{nu}.pgm")).exists());
        assert!(dir.path().join(format!("all/nu{nu}.ppm")).exists());
    }
}

#[test]
fn dilation_csv_on_stdout_is_one_table() {
    let job = JobSpec {
        nu: NuSelection::All,
        order: 3,
        format: Some(Format::Csv),
        ..JobSpec::new(Command::Dilation)
    };
    let mut out = Vec::new();
    run(&job, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[0], "nu,kernel,order,side,dilation,i,j");
    for (nu, line) in lines[1..].iter().enumerate() {
        assert!(line.starts_with(&format!("{nu},unit,3,8,")), "{line}");
    }
}
