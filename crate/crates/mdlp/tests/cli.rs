use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mdlp::ingest::save_image;
use mdlp_core::ColorImage;

fn mdlp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdlp")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Three synthetic classes of 16 tiles each.
fn tiles_dataset(root: &Path) {
    let out = mdlp(&["synth", "-o", s(root), "--classes", "3", "--tiles", "--seed", "7"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

fn parse_eval_csv(text: &str) -> Vec<(usize, f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n_r,arp,arr"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&mdlp(&[])), 1);
    assert_eq!(code(&mdlp(&["index", "--bogus"])), 1);
    assert_eq!(
        code(&mdlp(&["index", "--mode", "ltp", "--dataset", ".", "--index", "x"])),
        1
    );
    assert_eq!(
        code(&mdlp(&["index", "--nb", "7", "--dataset", ".", "--index", "x"])),
        1
    );
    assert_eq!(code(&mdlp(&["index"])), 1, "missing --dataset");
    assert_eq!(code(&mdlp(&["--help"])), 0);
}

#[test]
fn data_and_io_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("x.idx");
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let out = mdlp(&["index", "--dataset", s(&empty), "--index", s(&idx)]);
    assert_eq!(code(&out), 2);
    assert!(!idx.exists());
    let out = mdlp(&["index", "--dataset", s(&dir.path().join("absent")), "--index", s(&idx)]);
    assert_eq!(code(&out), 3);
    fs::write(&idx, b"not an index at all, just text").unwrap();
    assert_eq!(code(&mdlp(&["evaluate", "--index", s(&idx)])), 2);
}

#[test]
fn index_query_evaluate_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    tiles_dataset(&data);
    let idx = dir.path().join("db.idx");
    assert_eq!(
        code(&mdlp(&[
            "index",
            "--dataset",
            s(&data),
            "--index",
            s(&idx),
            "--jobs",
            "2"
        ])),
        0
    );

    // a database image retrieves itself first at distance zero
    let probe = data.join("texture01/texture01_r2_c3.png");
    let out = mdlp(&["query", s(&probe), "--index", s(&idx), "--nr", "5", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "rank,id,category,distance");
    assert_eq!(rows.len(), 6);
    assert!(rows[1].starts_with("1,texture01/texture01_r2_c3.png,1,"), "{}", rows[1]);
    let d: f64 = rows[1].rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(d, 0.0);

    // ARR = ARP * n_r / N_t on a uniform set, and the default grid is 1..=16
    let csv = dir.path().join("eval.csv");
    let out = mdlp(&["evaluate", "--index", s(&idx), "--output", s(&csv), "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), fs::read_to_string(&csv).unwrap());
    let rows = parse_eval_csv(&stdout(&out));
    assert_eq!(
        rows.iter().map(|r| r.0).collect::<Vec<_>>(),
        (1..=16).collect::<Vec<_>>()
    );
    for (nr, arp, arr) in rows {
        assert!((arr - arp * nr as f64 / 16.0).abs() < 2e-6, "n_r={nr}: {arp} {arr}");
    }
    assert!(
        (parse_eval_csv(&stdout(&out))[0].1 - 1.0).abs() < 1e-12,
        "self match at rank 1"
    );
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    tiles_dataset(&data);
    let (a, b) = (dir.path().join("a.idx"), dir.path().join("b.idx"));
    assert_eq!(
        code(&mdlp(&[
            "index",
            "--dataset",
            s(&data),
            "--index",
            s(&a),
            "--jobs",
            "1"
        ])),
        0
    );
    assert_eq!(
        code(&mdlp(&[
            "index",
            "--dataset",
            s(&data),
            "--index",
            s(&b),
            "--jobs",
            "4"
        ])),
        0
    );
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let e1 = mdlp(&[
        "evaluate",
        "--index",
        s(&a),
        "--format",
        "csv",
        "--nr-grid",
        "1,5,16",
        "--jobs",
        "1",
    ]);
    let e2 = mdlp(&["evaluate", "--index", s(&b), "--format", "csv", "--nr-grid", "1,5,16"]);
    assert_eq!(stdout(&e1), stdout(&e2));
}

#[test]
fn descriptor_modes_share_the_protocol() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    tiles_dataset(&data);
    let mut sizes = Vec::new();
    for mode in ["mdlp", "lbp", "lmep"] {
        let idx = dir.path().join(format!("{mode}.idx"));
        assert_eq!(
            code(&mdlp(&[
                "index",
                "--dataset",
                s(&data),
                "--index",
                s(&idx),
                "--mode",
                mode
            ])),
            0
        );
        sizes.push(fs::metadata(&idx).unwrap().len());
        let out = mdlp(&["evaluate", "--index", s(&idx), "--format", "csv", "--nr-grid", "16"]);
        assert_eq!(code(&out), 0, "{mode}");
        let rows = parse_eval_csv(&stdout(&out));
        assert!(rows[0].2 > 0.0 && rows[0].2 <= 1.0);
    }
    // 5, 1 and 4 blocks per channel
    let header = 37;
    let per_block = |total: u64| (total - header) / 48;
    assert_eq!(per_block(sizes[0]) - per_block(sizes[1]), 4 * 3 * 256 * 4);
    assert_eq!(per_block(sizes[0]) - per_block(sizes[2]), 3 * 256 * 4);

    // a query described differently from the index is a data error
    let probe = data.join("texture00/texture00_r0_c0.png");
    let out = mdlp(&[
        "query",
        s(&probe),
        "--index",
        s(&dir.path().join("lbp.idx")),
        "--mode",
        "mdlp",
    ]);
    assert_eq!(code(&out), 2);
    let out = mdlp(&["query", s(&probe), "--index", s(&dir.path().join("lbp.idx"))]);
    assert_eq!(code(&out), 0);
}

#[test]
fn evaluate_directly_from_dataset_with_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    tiles_dataset(&data);
    let config = dir.path().join("mdlp.toml");
    fs::write(
        &config,
        format!(
            "dataset = {:?}\nmode = \"lbp\"\nnr-grid = [4, 8]\nformat = \"csv\"\n",
            s(&data)
        ),
    )
    .unwrap();
    let per_cat = dir.path().join("cats.csv");
    let out = mdlp(&["--config", s(&config), "evaluate", "--per-category", s(&per_cat)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(parse_eval_csv(&stdout(&out)).len(), 2);
    let cats = fs::read_to_string(&per_cat).unwrap();
    assert_eq!(cats.lines().count(), 1 + 3 * 2);

    fs::write(&config, "colour = true\n").unwrap();
    assert_eq!(code(&mdlp(&["--config", s(&config), "evaluate"])), 1);
}

#[test]
fn tile_reports_bad_inputs_and_keeps_going() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("bark.png");
    let samples: Vec<u8> = (0..512 * 512 * 3).map(|i| (i % 251) as u8).collect();
    save_image(&ColorImage::from_interleaved_u8(512, 512, 3, &samples).unwrap(), &good).unwrap();
    let small = dir.path().join("small.png");
    save_image(
        &ColorImage::from_interleaved_u8(64, 64, 3, &[1; 64 * 64 * 3]).unwrap(),
        &small,
    )
    .unwrap();
    let junk = dir.path().join("junk.png");
    fs::write(&junk, "nope").unwrap();
    let out_dir = dir.path().join("tiles");

    let out = mdlp(&["tile", s(&small), s(&good), s(&junk), "-o", s(&out_dir)]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("small.png") && err.contains("junk.png"), "{err}");
    let mut names: Vec<String> = fs::read_dir(out_dir.join("bark"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 16);
    assert!(names.contains(&"bark_r0_c0.png".to_string()));
    assert!(names.contains(&"bark_r3_c3.png".to_string()));

    // the tiles reassemble into the source
    let tile = mdlp::ingest::decode_image(&out_dir.join("bark/bark_r1_c2.png")).unwrap();
    let t = tile.to_interleaved_u16();
    for (y, row) in t.chunks(128 * 3).enumerate() {
        let src = ((128 + y) * 512 + 256) * 3;
        let expected: Vec<u16> = samples[src..src + 128 * 3].iter().map(|&v| u16::from(v)).collect();
        assert_eq!(row, expected.as_slice());
    }

    let flat = dir.path().join("flat");
    assert_eq!(code(&mdlp(&["tile", s(&good), "-o", s(&flat), "--flat"])), 0);
    assert_eq!(fs::read_dir(&flat).unwrap().count(), 16);
}
