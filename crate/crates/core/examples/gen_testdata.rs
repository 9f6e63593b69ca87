//! Regenerate the canonical instance files under testdata/.

use latsheaf::blo::zoo;
use latsheaf::format::{
    blo_to_file, emit, lattice_to_file, site_to_file, InstanceFile, MvSpec, NameNode,
};
use latsheaf::lattice::FiniteLattice;
use latsheaf::site::lukasiewicz_site;

fn write(name: &str, f: &InstanceFile) {
    let dir = std::path::Path::new("testdata");
    std::fs::create_dir_all(dir).unwrap();
    std::fs::write(dir.join(name), emit(f)).unwrap();
    println!("wrote testdata/{name}");
}

fn main() {
    write(
        "lattice_b4.json",
        &lattice_to_file(&FiniteLattice::boolean(2)),
    );
    write(
        "lattice_c3.json",
        &lattice_to_file(&FiniteLattice::chain(3)),
    );
    write(
        "lattice_n5.json",
        &lattice_to_file(&FiniteLattice::pentagon_n5()),
    );
    write(
        "blo_b4f.json",
        &InstanceFile::Blo {
            size: 4,
            leq: FiniteLattice::boolean(2)
                .leq_table()
                .iter()
                .map(|r| r.iter().map(|&b| b as u8).collect())
                .collect(),
            labels: None,
            operators: vec![vec![0, 3, 2, 3]],
        },
    );
    write("blo_c3_simple.json", &blo_to_file(&zoo::c3_simple()));
    write(
        "mv_l3.json",
        &InstanceFile::Mv {
            spec: MvSpec {
                lukasiewicz: Some(2),
                oplus: None,
                neg: None,
            },
        },
    );
    // B4 as an MV-algebra, in explicit-table form: ⊕ = join, ¬ = complement
    write(
        "mv_b4.json",
        &InstanceFile::Mv {
            spec: MvSpec {
                lukasiewicz: None,
                oplus: Some(vec![
                    vec![0, 1, 2, 3],
                    vec![1, 1, 3, 3],
                    vec![2, 3, 2, 3],
                    vec![3, 3, 3, 3],
                ]),
                neg: Some(vec![3, 2, 1, 0]),
            },
        },
    );
    write("site_l3.json", &site_to_file(&lukasiewicz_site(2)));
    write(
        "site_chain2.json",
        &InstanceFile::Site {
            order: vec![vec![1, 1], vec![0, 1]],
            tensor: Some(vec![vec![0, 0], vec![0, 1]]),
        },
    );
    let empty = NameNode { entries: vec![] };
    let singleton_half = NameNode {
        entries: vec![(empty.clone(), 1)],
    };
    write(
        "name_rank2.json",
        &InstanceFile::Name {
            algebra: MvSpec {
                lukasiewicz: Some(2),
                oplus: None,
                neg: None,
            },
            name: NameNode {
                entries: vec![(empty, 2), (singleton_half, 2)],
            },
        },
    );
    write(
        "suite_basic.json",
        &InstanceFile::FormulaSuite {
            formulas: vec![
                "(all x (eq x x))".into(),
                "(ex x (all y (not (mem y x))))".into(),
                "(all x (all y (imp (and (mem x y) (eq x x)) (mem x y))))".into(),
            ],
        },
    );
    write(
        "suite_kj.json",
        &InstanceFile::FormulaSuite {
            formulas: vec![
                "(mem x y)".into(),
                "(eq x y)".into(),
                "(imp (mem x y) (mem x y))".into(),
                "(all v (imp (mem v y) (mem v y)))".into(),
                "(ex v (eq v v))".into(),
                "(or (mem x y) (not (mem x y)))".into(),
            ],
        },
    );
}
