//! The bundled example programs: the three trade protocols with their
//! bystander, the equivalence regression pairs, and twenty encoding inputs.
//! Shipped inside the binary so `cpc corpus` needs no files on disk.

use crate::cmd::Dialect;

pub struct CorpusFile {
    pub name: &'static str,
    pub dialect: Dialect,
    pub text: &'static str,
}

const fn cpc(name: &'static str, text: &'static str) -> CorpusFile {
    CorpusFile {
        name,
        dialect: Dialect::Cpc,
        text,
    }
}

pub const TRADE_SOLUTION_1: &str = include_str!("../corpus/trade_solution1.cpc");
pub const TRADE_SOLUTION_2: &str = include_str!("../corpus/trade_solution2.cpc");
pub const TRADE_SOLUTION_3: &str = include_str!("../corpus/trade_solution3.cpc");
pub const PROMISCUOUS: &str = include_str!("../corpus/promiscuous.cpc");

pub const EQUIV_PAIRS: [(&str, &str, &str); 2] = [
    (
        "protected absorption",
        include_str!("../corpus/equiv_protected_left.cpc"),
        include_str!("../corpus/equiv_protected_right.cpc"),
    ),
    (
        "compound absorption",
        include_str!("../corpus/equiv_compound_left.cpc"),
        include_str!("../corpus/equiv_compound_right.cpc"),
    ),
];

pub const INEQUIV_PAIR: (&str, &str, &str) = (
    "echoing near-miss",
    include_str!("../corpus/inequiv_left.cpc"),
    include_str!("../corpus/inequiv_right.cpc"),
);

pub const LINDA_PROGRAMS: [(&str, &str); 10] = [
    ("01_handoff", include_str!("../corpus/linda/01_handoff.linda")),
    ("02_receive_ok", include_str!("../corpus/linda/02_receive_ok.linda")),
    ("03_no_match", include_str!("../corpus/linda/03_no_match.linda")),
    ("04_private_token", include_str!("../corpus/linda/04_private_token.linda")),
    ("05_forwarder", include_str!("../corpus/linda/05_forwarder.linda")),
    ("06_empty_tuple", include_str!("../corpus/linda/06_empty_tuple.linda")),
    ("07_two_suppliers", include_str!("../corpus/linda/07_two_suppliers.linda")),
    ("08_spinner", include_str!("../corpus/linda/08_spinner.linda")),
    ("09_swap_then_match", include_str!("../corpus/linda/09_swap_then_match.linda")),
    ("10_input_race", include_str!("../corpus/linda/10_input_race.linda")),
];

pub const SPI_PROGRAMS: [(&str, &str); 10] = [
    ("01_relay", include_str!("../corpus/spi/01_relay.spi")),
    ("02_guarded_ok", include_str!("../corpus/spi/02_guarded_ok.spi")),
    ("03_decrypt", include_str!("../corpus/spi/03_decrypt.spi")),
    ("04_split_send", include_str!("../corpus/spi/04_split_send.spi")),
    ("05_case_zero", include_str!("../corpus/spi/05_case_zero.spi")),
    ("06_case_two", include_str!("../corpus/spi/06_case_two.spi")),
    ("07_echo_server", include_str!("../corpus/spi/07_echo_server.spi")),
    ("08_private_channel", include_str!("../corpus/spi/08_private_channel.spi")),
    ("09_numeric_reply", include_str!("../corpus/spi/09_numeric_reply.spi")),
    ("10_sealed_pair", include_str!("../corpus/spi/10_sealed_pair.spi")),
];

/// Every bundled file with its dialect, for round-trip sweeps.
pub fn all_files() -> Vec<CorpusFile> {
    let mut out = vec![
        cpc("trade_solution1", TRADE_SOLUTION_1),
        cpc("trade_solution2", TRADE_SOLUTION_2),
        cpc("trade_solution3", TRADE_SOLUTION_3),
        cpc("promiscuous", PROMISCUOUS),
    ];
    for (name, left, right) in EQUIV_PAIRS {
        out.push(cpc(name, left));
        out.push(cpc(name, right));
    }
    out.push(cpc(INEQUIV_PAIR.0, INEQUIV_PAIR.1));
    out.push(cpc(INEQUIV_PAIR.0, INEQUIV_PAIR.2));
    for (name, text) in LINDA_PROGRAMS {
        out.push(CorpusFile {
            name,
            dialect: Dialect::Linda,
            text,
        });
    }
    for (name, text) in SPI_PROGRAMS {
        out.push(CorpusFile {
            name,
            dialect: Dialect::Spi,
            text,
        });
    }
    out
}
