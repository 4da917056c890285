use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use tupper_core::imageio::{emit_voxels, parse_pnm, Palette, Rgb};
use tupper_core::{ColorField, GridParams};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/data");

fn tupper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tupper"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    format!("{DATA}/{name}")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, bytes: &[u8]) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, bytes).unwrap();
    p
}

#[test]
fn encode_single_pixel() {
    let dir = TempDir::new().unwrap();
    let img = write(&dir, "one.pbm", b"P1\n1 1\n1\n");
    let out = tupper(&["encode", "--input", path(&img), "--colors", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "6\n");
    let diag = String::from_utf8_lossy(&out.stderr);
    assert!(
        diag.contains("3 bits") && diag.contains("1 decimal digits"),
        "{diag}"
    );

    let k = dir.path().join("k");
    let out = tupper(&[
        "encode",
        "--input",
        path(&img),
        "--colors",
        "1",
        "--hex",
        "--output",
        path(&k),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&k).unwrap(), "0x6\n");
}

#[test]
fn encode_empty_image() {
    let dir = TempDir::new().unwrap();
    let img = write(&dir, "zero.pbm", b"P1\n1 1\n0\n");
    let out = tupper(&["encode", "--input", path(&img), "--colors", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn test_card_golden_round_trip() {
    let dir = TempDir::new().unwrap();
    let k = dir.path().join("card.k");
    let out = tupper(&[
        "encode",
        "--input",
        &data("test_card.ppm"),
        "--palette",
        &data("test_card.palette"),
        "--output",
        path(&k),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        fs::read_to_string(&k).unwrap().trim(),
        fs::read_to_string(data("test_card.k")).unwrap().trim()
    );

    let img = dir.path().join("card.ppm");
    let out = tupper(&[
        "decode",
        "--k",
        &data("test_card.k"),
        "--dims",
        "50,15",
        "--colors",
        "3",
        "--palette",
        &data("test_card.palette"),
        "--output",
        path(&img),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        fs::read(&img).unwrap(),
        fs::read(data("test_card.ppm")).unwrap()
    );
}

#[test]
fn encode_rejects_mismatched_dims() {
    let out = tupper(&[
        "encode",
        "--input",
        &data("test_card.ppm"),
        "--palette",
        &data("test_card.palette"),
        "--dims",
        "15,50",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn decode_six_and_zero() {
    let dir = TempDir::new().unwrap();
    let six = write(&dir, "six", b"6\n");
    let zero = write(&dir, "zero", b"0\n");
    let img = dir.path().join("out.pbm");
    let decode = |k: &Path| {
        tupper(&[
            "decode",
            "--k",
            path(k),
            "--dims",
            "1,1",
            "--colors",
            "1",
            "--format",
            "pbm",
            "--output",
            path(&img),
        ])
    };

    assert!(decode(&six).status.success());
    let image = parse_pnm(&fs::read(&img).unwrap()).unwrap();
    assert_eq!(image.grid.pixels, vec![Rgb::BLACK]);

    assert!(decode(&zero).status.success());
    let image = parse_pnm(&fs::read(&img).unwrap()).unwrap();
    assert_eq!(image.grid.pixels, vec![Rgb::WHITE]);
}

#[test]
fn decode_voxels_round_trip() {
    let dir = TempDir::new().unwrap();
    let params = GridParams::from_dims(2, &[2, 3, 2]).unwrap();
    let mut field = ColorField::empty(params);
    field.set(&[0, 0, 0], 1).unwrap();
    field.set(&[1, 2, 1], 2).unwrap();
    field.set(&[0, 1, 1], 2).unwrap();
    let vox = write(&dir, "in.nvox", &emit_voxels(&field).unwrap());
    let k = dir.path().join("k");
    assert!(
        tupper(&["encode", "--input", path(&vox), "--output", path(&k)])
            .status
            .success()
    );

    let back = dir.path().join("out.nvox");
    let out = tupper(&[
        "decode",
        "--k",
        path(&k),
        "--dims",
        "2,3,2",
        "--colors",
        "2",
        "--output",
        path(&back),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(fs::read(&back).unwrap(), fs::read(&vox).unwrap());
}

#[test]
fn decode_multicolor_strict_and_layered() {
    let dir = TempDir::new().unwrap();
    // R = 4 for a 1x1 grid with m = 2; bits 1 and 2 of N paint both colors.
    let k = write(&dir, "k", b"24\n");
    let out_path = dir.path().join("out.ppm");
    let base = [
        "decode",
        "--k",
        path(&k),
        "--dims",
        "1,1",
        "--colors",
        "2",
        "--output",
        path(&out_path),
    ];

    let out = tupper(&base);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("several colors"));

    let mut layered = base.to_vec();
    layered.push("--layered");
    assert!(tupper(&layered).status.success());
    let image = parse_pnm(&fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(
        image.grid.pixels,
        vec![Palette::default_for(2).color(1).unwrap()]
    );
}

#[test]
fn eval_examples() {
    let dir = TempDir::new().unwrap();
    let six = write(&dir, "six", b"6");
    let zero = write(&dir, "zero", b"0");
    let eval = |k: &Path, point: &str| {
        tupper(&[
            "eval",
            "--k",
            path(k),
            "--dims",
            "1,1",
            "--colors",
            "1",
            "--point",
            point,
            "--color",
            "1",
            "--fast",
        ])
    };

    let out = eval(&six, "0.5,6.5");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 (painted)\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("agrees"));

    let out = eval(&six, "0.5,7.5");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0 (unpainted)\n");

    let out = eval(&zero, "0.25,0.75");
    assert_eq!(stdout(&out), "0 (unpainted)\n");

    let out = eval(&six, "-3,-12.125");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn eval_rejects_bad_points() {
    let dir = TempDir::new().unwrap();
    let six = write(&dir, "six", b"6");
    for point in ["0.1,6.5", "0.5", "x,1"] {
        let out = tupper(&[
            "eval",
            "--k",
            path(&six),
            "--dims",
            "1,1",
            "--colors",
            "1",
            "--point",
            point,
            "--color",
            "1",
        ]);
        assert_eq!(out.status.code(), Some(1), "{point}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn render_literal_matches_fast() {
    let dir = TempDir::new().unwrap();
    let fast = dir.path().join("fast.ppm");
    let literal = dir.path().join("literal.ppm");
    for (evaluator, out_path) in [("fast", &fast), ("literal", &literal)] {
        let out = tupper(&[
            "render",
            "--k",
            &data("test_card.k"),
            "--dims",
            "50,15",
            "--colors",
            "3",
            "--palette",
            &data("test_card.palette"),
            "--scale",
            "2",
            "--evaluator",
            evaluator,
            "--output",
            path(out_path),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let fast_bytes = fs::read(&fast).unwrap();
    assert_eq!(fast_bytes, fs::read(&literal).unwrap());
    let image = parse_pnm(&fast_bytes).unwrap();
    assert_eq!((image.grid.width, image.grid.height), (100, 30));
}

#[test]
fn render_slice_of_three_dimensional_field() {
    let dir = TempDir::new().unwrap();
    let params = GridParams::from_dims(2, &[3, 2, 4]).unwrap();
    let mut field = ColorField::empty(params.clone());
    for (i, cell) in params.cells().enumerate() {
        field.set(&cell, (i * 7 % 3) as u32).unwrap();
    }
    let vox = write(&dir, "in.nvox", &emit_voxels(&field).unwrap());
    let k = dir.path().join("k");
    assert!(
        tupper(&["encode", "--input", path(&vox), "--output", path(&k)])
            .status
            .success()
    );

    for evaluator in ["fast", "literal"] {
        let img = dir.path().join(format!("{evaluator}.ppm"));
        let out = tupper(&[
            "render",
            "--k",
            path(&k),
            "--dims",
            "3,2,4",
            "--colors",
            "2",
            "--slice",
            "x2=1",
            "--evaluator",
            evaluator,
            "--output",
            path(&img),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );

        // x1 runs right, x3 runs up.
        let grid = parse_pnm(&fs::read(&img).unwrap()).unwrap().grid;
        assert_eq!((grid.width, grid.height), (3, 4));
        let palette = Palette::default_for(2);
        for x1 in 0..3u64 {
            for x3 in 0..4u64 {
                let color = field.get(&[x1, 1, x3]).unwrap();
                assert_eq!(
                    grid.get(x1 as usize, 3 - x3 as usize),
                    palette.color(color).unwrap()
                );
            }
        }
    }

    let out = tupper(&[
        "render",
        "--k",
        path(&k),
        "--dims",
        "3,2,4",
        "--colors",
        "2",
        "--slice",
        "x2=2",
        "--output",
        path(&dir.path().join("bad.ppm")),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_exhaustive_small_grid() {
    let out = tupper(&["verify", "--exhaustive", "--dims", "2,2", "--colors", "2"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("checked 81 fields"));
}

#[test]
fn verify_random_three_dimensional() {
    let out = tupper(&[
        "verify",
        "--random",
        "200",
        "--min-n",
        "3",
        "--max-n",
        "3",
        "--max-dim",
        "4",
        "--max-colors",
        "3",
        "--seed",
        "11",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("checked 200 fields"));
}

#[test]
fn verify_reports_injected_corruption() {
    let dir = TempDir::new().unwrap();
    let out = tupper(&[
        "verify",
        "--random",
        "4",
        "--inject-corruption",
        "--repro-dir",
        path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let diag = String::from_utf8_lossy(&out.stderr);
    assert!(diag.contains("4 of 4 fields mismatched"), "{diag}");
    assert!(dir.path().join("mismatch-1.nvox").exists());
    assert!(dir.path().join("mismatch-4.k").exists());
}

#[test]
fn verify_refuses_large_exhaustive_runs() {
    let out = tupper(&["verify", "--exhaustive", "--dims", "5,5", "--colors", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classic_round_trip() {
    let dir = TempDir::new().unwrap();
    // Bottom-left pixel painted: k = 17.
    let mut pbm = b"P1\n106 17\n".to_vec();
    for row in 0..17 {
        for x in 0..106 {
            pbm.extend_from_slice(if row == 16 && x == 0 { b"1 " } else { b"0 " });
        }
        pbm.push(b'\n');
    }
    let img = write(&dir, "in.pbm", &pbm);
    let out = tupper(&["classic-encode", "--input", path(&img)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout(&out), "17\n");

    let k = write(&dir, "k", b"17\n");
    let decoded = dir.path().join("decoded.pbm");
    let rendered = dir.path().join("rendered.pbm");
    assert!(tupper(&[
        "classic-decode",
        "--k",
        path(&k),
        "--output",
        path(&decoded)
    ])
    .status
    .success());
    assert!(tupper(&[
        "classic-render",
        "--k",
        path(&k),
        "--output",
        path(&rendered)
    ])
    .status
    .success());
    assert_eq!(fs::read(&decoded).unwrap(), fs::read(&rendered).unwrap());
    let grid = parse_pnm(&fs::read(&decoded).unwrap()).unwrap().grid;
    assert_eq!(parse_pnm(&pbm).unwrap().grid, grid);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(tupper(&["bogus"]).status.code(), Some(1));
    assert_eq!(tupper(&["encode"]).status.code(), Some(1));
    assert_eq!(
        tupper(&[
            "encode",
            "--input",
            "/nonexistent/file.ppm",
            "--colors",
            "1"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(tupper(&["--help"]).status.code(), Some(0));
}
