use std::thread::sleep;
use std::time::Duration;

use proptest::prelude::*;
use tricount::driver::{
    emit, parse, run, run_with_source, sweep, Algorithm, DriverError, Format, GraphSource, Input,
    RunConfig, RunReport,
};
use tricount::gen::{generate, normalize, GeneratorSpec, Graph};
use tricount::runtime::Scheduler;
use tricount::seq::brute_force;

fn gen_input(text: &str) -> Input {
    Input::Generator(text.parse().unwrap())
}

fn k4_file(dir: &std::path::Path) -> std::path::PathBuf {
    let path = dir.join("k4.txt");
    std::fs::write(
        &path,
        "# complete graph on four vertices\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n",
    )
    .unwrap();
    path
}

fn temp_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tricount-driver-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn every_algorithm_counts_k4() {
    let dir = temp_dir("k4");
    let path = k4_file(&dir);
    for algorithm in Algorithm::ALL {
        for pes in [1, 2, 4] {
            let config = RunConfig::new(algorithm, pes, Input::File(path.clone()));
            let report: RunReport = run(&config).unwrap();
            assert_eq!((report.n, report.m, report.triangles), (4, 6, 4));
        }
    }
}

#[test]
fn algorithms_agree_on_generated_graphs() {
    for spec in [
        "family=gnm,n=500,m=4000,seed=1",
        "family=rgg2d,n=800,edgefactor=10,seed=2",
        "family=rmat,scale=9,edgefactor=8,seed=3",
    ] {
        let input = gen_input(spec);
        let graph = generate(&spec.parse::<GeneratorSpec>().unwrap()).unwrap();
        let truth = brute_force(&graph.edges).unwrap();
        let reports: Vec<RunReport> = Algorithm::ALL
            .into_iter()
            .map(|a| run(&RunConfig::new(a, 7, input.clone())).unwrap())
            .collect();
        assert!(reports.iter().all(|r| r.triangles == truth), "{spec}");
        let [_, ditric, ditric2, cetric, cetric2] = &reports[..] else {
            unreachable!()
        };
        assert_ne!(ditric.total_words, ditric2.total_words);
        assert_ne!(cetric.max_outgoing_messages, 0);
        assert_eq!(cetric.local_phase, cetric2.local_phase);
    }
}

struct SlowSource {
    graph: Graph,
    delay: Duration,
}

impl GraphSource for SlowSource {
    fn load(&self) -> Result<Graph, DriverError> {
        sleep(self.delay);
        Ok(self.graph.clone())
    }
}

#[test]
fn ingestion_is_not_timed() {
    let graph = generate(&"family=gnm,n=300,m=1500,seed=9".parse().unwrap()).unwrap();
    let source = SlowSource {
        graph,
        delay: Duration::from_millis(400),
    };
    for algorithm in [Algorithm::Seq, Algorithm::Ditric, Algorithm::Cetric] {
        let mut config = RunConfig::new(algorithm, 4, gen_input("family=gnm,n=300,m=1500,seed=9"));
        config.wall_clock = true;
        let started = std::time::Instant::now();
        let report: RunReport = run_with_source(&config, &source).unwrap();
        assert!(started.elapsed() >= Duration::from_millis(400));
        assert!(report.timings.total > 0.0);
        assert!(report.timings.total < 0.4, "{:?}", report.timings);
        let t = report.timings;
        let parts = t.preprocessing + t.local + t.contraction + t.global + t.postprocessing;
        assert!((parts - t.total).abs() < 1e-9);
    }
}

#[test]
fn reports_are_reproducible_byte_for_byte() {
    for algorithm in Algorithm::ALL {
        let mut config = RunConfig::new(algorithm, 6, gen_input("family=rmat,scale=9,seed=4"));
        config.lcc = true;
        config.approx = algorithm == Algorithm::Cetric2;
        let first: RunReport = run(&config).unwrap();
        let second: RunReport = run(&config).unwrap();
        for format in [Format::Json, Format::Csv] {
            assert_eq!(
                emit(std::slice::from_ref(&first), format).unwrap(),
                emit(std::slice::from_ref(&second), format).unwrap()
            );
        }
    }
}

#[test]
fn concurrent_scheduler_gives_the_same_count() {
    let input = gen_input("family=gnm,n=400,m=3000,seed=8");
    for algorithm in [Algorithm::Ditric2, Algorithm::Cetric] {
        let mut config = RunConfig::new(algorithm, 9, input.clone());
        let det: RunReport = run(&config).unwrap();
        config.scheduler = Scheduler::Concurrent;
        let conc: RunReport = run(&config).unwrap();
        assert_eq!(det.triangles, conc.triangles);
        assert_eq!(det.local_phase, conc.local_phase);
    }
}

#[test]
fn reports_round_trip_through_both_formats() {
    let mut config = RunConfig::new(
        Algorithm::Cetric,
        1,
        gen_input("family=gnm,n=200,m=1000,seed=2"),
    );
    config.approx = true;
    config.delta = Some(500);
    let reports: Vec<RunReport> = sweep(&config, &[2, 3, 5]).unwrap();
    for format in [Format::Json, Format::Csv] {
        let text = emit(&reports, format).unwrap();
        assert_eq!(parse::<f64>(&text, format).unwrap(), reports);
    }
    let csv = emit(&reports, Format::Csv).unwrap();
    assert_eq!(csv.lines().count(), 1 + reports.len());
    let single = emit(&reports[..1], Format::Json).unwrap();
    assert_eq!(parse::<f64>(&single, Format::Json).unwrap(), reports[..1]);
}

#[test]
fn empty_graphs_give_zero_metrics() {
    let dir = temp_dir("empty");
    let path = dir.join("empty.txt");
    std::fs::write(&path, "# nothing here\n").unwrap();
    let report: RunReport = run(&RunConfig::new(Algorithm::Seq, 1, Input::File(path))).unwrap();
    assert_eq!((report.n, report.m, report.triangles), (0, 0, 0));
    assert_eq!(report.total_words, 0);
    for format in [Format::Json, Format::Csv] {
        let text = emit(std::slice::from_ref(&report), format).unwrap();
        assert_eq!(parse::<f64>(&text, format).unwrap(), vec![report.clone()]);
    }
    let header_only = emit::<f64>(&[], Format::Csv).unwrap();
    assert_eq!(header_only.lines().count(), 1);
    assert!(parse::<f64>(&header_only, Format::Csv).unwrap().is_empty());
}

#[test]
fn configuration_errors_are_distinguished() {
    let input = gen_input("family=gnm,n=100,m=300,seed=0");
    let mut config = RunConfig::new(Algorithm::Ditric, 2, input.clone());
    config.approx = true;
    let err = run::<f64>(&config).unwrap_err();
    assert_eq!(err.exit_code(), 2);

    let config = RunConfig::new(Algorithm::Cetric, 0, input.clone());
    assert_eq!(run::<f64>(&config).unwrap_err().exit_code(), 2);

    let mut config = RunConfig::new(Algorithm::Cetric2, 2, input.clone());
    config.approx = true;
    config.fpr = 1.5;
    assert_eq!(run::<f64>(&config).unwrap_err().exit_code(), 2);

    let config = RunConfig::new(
        Algorithm::Ditric,
        2,
        Input::File("/definitely/not/here".into()),
    );
    assert_eq!(run::<f64>(&config).unwrap_err().exit_code(), 3);

    let dir = temp_dir("bad");
    let path = dir.join("bad.txt");
    std::fs::write(&path, "0 1\n1 x\n").unwrap();
    let err = run::<f64>(&RunConfig::new(Algorithm::Seq, 1, Input::File(path))).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("line 2"), "{err}");
}

#[test]
fn lcc_dump_uses_original_ids() {
    let dir = temp_dir("lcc");
    let input = dir.join("triangle.txt");
    std::fs::write(&input, "10 20\n20 30\n30 10\n30 40\n").unwrap();
    for algorithm in [Algorithm::Seq, Algorithm::Ditric, Algorithm::Cetric2] {
        let out = dir.join(format!("{algorithm}.lcc"));
        let mut config = RunConfig::new(algorithm, 2, Input::File(input.clone()));
        config.lcc = true;
        config.lcc_out = Some(out.clone());
        let report: RunReport = run(&config).unwrap();
        assert_eq!(report.triangles, 1);
        let text = std::fs::read_to_string(&out).unwrap();
        let rows: Vec<Vec<&str>> = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.split_whitespace().collect())
            .collect();
        assert_eq!(
            rows,
            vec![
                vec!["10", "1", "0.5"],
                vec!["20", "1", "0.5"],
                vec!["30", "1", "0.16666666666666666"],
                vec!["40", "0", "0"],
            ],
            "{algorithm}"
        );
    }
}

#[test]
fn f32_reports_work_too() {
    let config = RunConfig::new(
        Algorithm::Cetric,
        3,
        gen_input("family=gnm,n=150,m=900,seed=5"),
    );
    let single: RunReport<f32> = run(&config).unwrap();
    let double: RunReport<f64> = run(&config).unwrap();
    assert_eq!(single.triangles, double.triangles);
    assert!((single.modeled_time as f64 - double.modeled_time).abs() < 1e-3 * double.modeled_time);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn arbitrary_reports_round_trip(
        triangles in any::<u64>(),
        words in any::<u64>(),
        modeled in 0.0f64..1e12,
        estimate in proptest::option::of(-1e9f64..1e9),
        delta in proptest::option::of(1usize..1 << 20),
        pes in 1usize..4096,
        alpha in 0.0f64..100.0,
        seed in any::<u64>(),
    ) {
        let mut config = RunConfig::new(Algorithm::Cetric2, pes, Input::File("a dir/g,1.txt".into()));
        config.delta = delta;
        config.alpha = alpha;
        config.seed = seed;
        let mut report: RunReport = run_placeholder(config);
        report.triangles = triangles;
        report.total_words = words;
        report.modeled_time = modeled;
        report.estimate = estimate;
        for format in [Format::Json, Format::Csv] {
            let text = emit(std::slice::from_ref(&report), format).unwrap();
            prop_assert_eq!(parse::<f64>(&text, format).unwrap(), vec![report.clone()]);
        }
    }
}

/// A report with zero metrics for `config`, without running anything.
fn run_placeholder(config: RunConfig) -> RunReport {
    let empty = normalize(&[]);
    struct Fixed(Graph);
    impl GraphSource for Fixed {
        fn load(&self) -> Result<Graph, DriverError> {
            Ok(self.0.clone())
        }
    }
    let mut seq = config.clone();
    seq.algorithm = Algorithm::Seq;
    let mut report: RunReport = run_with_source(&seq, &Fixed(empty)).unwrap();
    report.config = config;
    report
}
