use hhck::affine::build_curve;
use hhck::kernel::{parse_kernel_file, KernelSpec};
use hhck::GridPoint;
use sha2::{Digest, Sha256};

fn checksum_line(text: &str) -> &str {
    text.lines()
        .find_map(|l| l.strip_prefix("# sha256 of the strokes field: "))
        .expect("kernel file carries a checksum")
}

#[test]
fn bundled_kernel_files_match_their_checksums() {
    for name in ["mouse", "frog"] {
        let path = format!("{}/kernels/{name}.txt", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(path).unwrap();
        let file = parse_kernel_file(&text).unwrap();
        let digest = Sha256::digest(file.strokes.letters().as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(hex, checksum_line(&text), "{name}");
    }
}

#[test]
fn mouse_and_frog_cells() {
    let cells = |k: KernelSpec| -> Vec<(u32, u32)> {
        k.path().cells().iter().map(|c| (c.x, c.y)).collect()
    };
    assert_eq!(
        cells(KernelSpec::mouse()),
        [
            (0, 0),
            (1, 0),
            (1, 1),
            (0, 1),
            (1, 2),
            (0, 2),
            (0, 3),
            (1, 3),
            (2, 2),
            (2, 3),
            (3, 3),
            (3, 2),
            (2, 1),
            (2, 0),
            (3, 1),
            (3, 0)
        ]
    );
    assert_eq!(
        cells(KernelSpec::frog()),
        [
            (0, 0),
            (1, 0),
            (0, 1),
            (1, 1),
            (0, 2),
            (0, 3),
            (1, 3),
            (1, 2),
            (2, 3),
            (2, 2),
            (3, 3),
            (3, 2),
            (2, 1),
            (3, 1),
            (2, 0),
            (3, 0)
        ]
    );
}

#[test]
fn kernel_files_resolve_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hook.txt");
    std::fs::write(&path, KernelSpec::frog().to_text()).unwrap();
    let k = KernelSpec::resolve(path.to_str().unwrap()).unwrap();
    assert_eq!(k.name(), "hook");
    assert_eq!(k.path(), KernelSpec::frog().path());
    assert_eq!(
        KernelSpec::resolve("no-such-kernel").unwrap_err().name(),
        "UnknownKernel"
    );
}

#[test]
fn a_larger_kernel_grows() {
    // the order-3 Hilbert curve used as a seed
    let seed = build_curve(0, 3, &KernelSpec::unit()).unwrap();
    let k = KernelSpec::validate("h3", seed.clone()).unwrap();
    let grown = build_curve(0, 2, &k).unwrap();
    assert_eq!(grown, build_curve(0, 4, &KernelSpec::unit()).unwrap());
    assert_eq!(grown.last(), GridPoint::new(15, 0));
}

#[test]
fn any_corner_to_corner_seed_grows() {
    // boustrophedon over 4x4: corner entry and exit are enough for every
    // rule set to join its quadrant images
    let cells = [
        (0, 0),
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 3),
        (1, 2),
        (1, 1),
        (1, 0),
        (2, 0),
        (2, 1),
        (2, 2),
        (2, 3),
        (3, 3),
        (3, 2),
        (3, 1),
        (3, 0),
    ]
    .map(|(x, y)| GridPoint::new(x, y))
    .to_vec();
    let snake = KernelSpec::from_cells("snake", 4, cells).unwrap();
    for nu in 0..12 {
        let c = build_curve(nu, 3, &snake).unwrap();
        assert_eq!(c.side(), 16);
        assert!(c.is_edge_connected());
    }
}
