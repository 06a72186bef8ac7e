//! Bundled example scenarios: a share-trade negotiation refined across three
//! protocol versions with an eavesdropping attacker, plus small equivalence
//! regression pairs. These double as a regression corpus for the engine and
//! the command-line runner.

use crate::name::Name;
use crate::pattern::Pattern;
use crate::process::Process;

fn n(s: &str) -> Name {
    Name::surface(s)
}

fn v(s: &str) -> Pattern {
    Pattern::Variable(n(s))
}

fn b(s: &str) -> Pattern {
    Pattern::Binding(n(s))
}

fn pr(s: &str) -> Pattern {
    Pattern::Protected(n(s))
}

fn c(l: Pattern, r: Pattern) -> Pattern {
    Pattern::compound(l, r)
}

fn c3(a: Pattern, bb: Pattern, cc: Pattern) -> Pattern {
    c(c(a, bb), cc)
}

fn case(p: Pattern, body: Process) -> Process {
    Process::case(p, body)
}

/// `B(x) = buyer.x -> ok`: the buyer registers the equity it obtained.
pub fn buyer_done(x: Pattern) -> Process {
    case(c(v("buyer"), x), Process::Success)
}

/// `S(y) = seller.y -> ok`: the seller registers the payment it obtained.
pub fn seller_done(y: Pattern) -> Process {
    case(c(v("seller"), y), Process::Success)
}

/// `P(z1, z2) = thief.z1.z2 -> ok`: the thief registers two stolen items.
pub fn thief_done(z1: Pattern, z2: Pattern) -> Process {
    case(c3(v("thief"), z1, z2), Process::Success)
}

/// First protocol: the buyer meets the seller on the market name `s`,
/// learns a channel, and trades shares for a bank account over it.
pub fn buy1() -> Process {
    case(
        c(v("s"), b("m")),
        case(c3(v("m"), v("b"), b("x")), buyer_done(v("x"))),
    )
}

pub fn sell1() -> Process {
    Process::restrict(
        n("n"),
        case(
            c(v("s"), v("n")),
            case(c3(v("n"), b("y"), v("c")), seller_done(v("y"))),
        ),
    )
}

pub fn solution1() -> Process {
    Process::par(buy1(), sell1())
}

/// The unique terminal state of the first protocol.
pub fn solution1_final() -> Process {
    Process::restrict(
        n("n"),
        Process::par(buyer_done(v("c")), seller_done(v("b"))),
    )
}

/// Second protocol: identities are exchanged on `s`, then matched against a
/// registrar that hands both parties a shared channel.
pub fn buy2() -> Process {
    case(
        c3(v("s"), v("iB"), b("j")),
        case(
            c3(v("nB"), v("j"), b("m")),
            case(c3(v("m"), v("b"), b("x")), buyer_done(v("x"))),
        ),
    )
}

pub fn sell2() -> Process {
    case(
        c3(v("s"), b("j"), v("iS")),
        case(
            c3(v("nS"), v("j"), b("m")),
            case(c3(v("m"), b("y"), v("c")), seller_done(v("y"))),
        ),
    )
}

pub fn registrar2() -> Process {
    Process::restrict(
        n("n"),
        Process::par(
            case(c3(v("nB"), v("iS"), v("n")), Process::Null),
            case(c3(v("nS"), v("iB"), v("n")), Process::Null),
        ),
    )
}

pub fn solution2() -> Process {
    Process::par(buy2(), Process::par(sell2(), registrar2()))
}

/// Third protocol: registrar names and identities are protected and
/// restricted, so neither can be forged or intercepted.
pub fn buy3() -> Process {
    case(
        c3(v("s"), v("iB"), b("j")),
        case(
            c3(pr("nB"), v("j"), b("m")),
            case(c3(pr("m"), v("b"), b("x")), buyer_done(v("x"))),
        ),
    )
}

pub fn sell3() -> Process {
    case(
        c3(v("s"), b("j"), v("iS")),
        case(
            c3(pr("nS"), v("j"), b("m")),
            case(c3(pr("m"), b("y"), v("c")), seller_done(v("y"))),
        ),
    )
}

pub fn registrar3() -> Process {
    Process::restrict(
        n("n"),
        Process::par(
            case(c3(pr("nB"), pr("iS"), v("n")), Process::Null),
            case(c3(pr("nS"), pr("iB"), v("n")), Process::Null),
        ),
    )
}

pub fn solution3() -> Process {
    Process::restrict_all(
        [n("iB"), n("iS"), n("nB"), n("nS")],
        Process::par(buy3(), Process::par(sell3(), registrar3())),
    )
}

/// The attacker: grabs any compound-headed exchange it can see and records
/// the two pieces with the thief.
pub fn promiscuous() -> Process {
    case(c(c(b("z1"), b("z2")), v("a")), thief_done(v("z1"), v("z2")))
}

/// A theft is visible when some reachable state shows a barb containing both
/// the thief's name and the buyer's bank account.
pub fn theft_names() -> (Name, Name) {
    (n("thief"), n("b"))
}

/// A protected case is absorbed by a replicated variable case on the same
/// name: both sides behave as the replication alone.
pub fn equiv_pair_protected() -> (Process, Process) {
    let rep = Process::replicate(case(v("n"), Process::Null));
    (Process::par(case(pr("n"), Process::Null), rep.clone()), rep)
}

/// A two-binder case is absorbed by a replicated one-binder case: every
/// compound the pair matches, the single binder matches too.
pub fn equiv_pair_compound() -> (Process, Process) {
    let rep = Process::replicate(case(b("z"), Process::Null));
    (
        Process::par(case(c(b("x"), b("y")), Process::Null), rep.clone()),
        rep,
    )
}

/// A near-miss of the absorption above: the absorbed case can echo its input
/// on a fresh name the replication cannot produce, so the two sides differ.
pub fn inequiv_pair() -> (Process, Process) {
    let q = Process::replicate(case(
        b("z"),
        Process::par(
            case(v("m"), Process::Null),
            case(v("m"), case(pr("w"), Process::Null)),
        ),
    ));
    let p = Process::par(
        case(
            b("x"),
            Process::par(
                case(v("x"), Process::Null),
                case(v("m"), case(pr("w"), Process::Null)),
            ),
        ),
        q.clone(),
    );
    (p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::struct_eq;
    use crate::reduce::{explore, min_steps_to_barb, reductions};

    #[test]
    fn solution1_trades_in_two_steps() {
        let g = explore(&solution1(), 8);
        assert!(!g.truncated);
        let sizes: alloc::vec::Vec<usize> =
            g.levels.iter().map(|l| l.len()).collect();
        assert_eq!(sizes, alloc::vec![1, 1, 1]);
        let dead = g.deadlocked();
        assert_eq!(dead.len(), 1);
        assert!(struct_eq(&g.states[dead[0]], &solution1_final()));
    }

    #[test]
    fn solution2_trades_in_four_steps_every_way() {
        let g = explore(&solution2(), 10);
        assert!(!g.truncated);
        let sizes: alloc::vec::Vec<usize> =
            g.levels.iter().map(|l| l.len()).collect();
        assert_eq!(sizes, alloc::vec![1, 1, 2, 1, 1]);
        // every maximal trace has length 4: no state before the last level
        // is stuck, and the last level's single state is.
        let dead = g.deadlocked();
        assert_eq!(dead, g.levels[4]);
        assert!(struct_eq(&g.states[dead[0]], &solution1_final()));
    }

    #[test]
    fn attacker_steals_in_second_protocol_step() {
        let attacked = Process::par(solution1(), promiscuous());
        let (thief, bank) = theft_names();
        assert_eq!(min_steps_to_barb(&attacked, &thief, 6), Some(2));
        // the thief's record includes the bank account
        let g = explore(&attacked, 6);
        assert!(g.states.iter().any(|s| {
            crate::reduce::barbs(s)
                .iter()
                .any(|bb| bb.names.contains(&thief) && bb.names.contains(&bank))
        }));
    }

    #[test]
    fn third_protocol_resists_the_attacker() {
        let attacked = Process::par(solution3(), promiscuous());
        let (thief, bank) = theft_names();
        let g = explore(&attacked, 6);
        assert!(!g.states.iter().any(|s| {
            crate::reduce::barbs(s)
                .iter()
                .any(|bb| bb.names.contains(&thief) && bb.names.contains(&bank))
        }));
        // the attacker still fires immediately, grabbing the market handshake
        let first = reductions(&attacked);
        assert!(first.iter().any(|s| {
            crate::reduce::barbs(s)
                .iter()
                .any(|bb| bb.names.contains(&thief))
        }));
    }
}
