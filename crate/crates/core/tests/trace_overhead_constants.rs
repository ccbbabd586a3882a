//! Frozen overhead constants for every trace under the default profile.
//!
//! The expected numbers were tabulated independently, message by message,
//! from the documented sequences: processing cost at the origin, each
//! relay, and the destination, plus the link cost of every hop. Any change
//! to the trace tables or the default profile must re-derive them.

use fran_core::{build_trace, trace_overhead, HandoverKind, OverheadProfile, Procedure};

const EXPECTED: &[(HandoverKind, Procedure, f64, f64)] = &[
    (HandoverKind::FapToMrrh, Procedure::Fran, 44.0, 38.0),
    (HandoverKind::FapToFap, Procedure::Fran, 28.0, 20.0),
    (HandoverKind::MrrhToFap, Procedure::Fran, 56.0, 44.0),
    (HandoverKind::FapToMrrh, Procedure::NonFran, 196.0, 125.0),
    (HandoverKind::FapToFap, Procedure::NonFran, 156.0, 107.0),
    (HandoverKind::MrrhToFap, Procedure::NonFran, 197.0, 125.0),
];

#[test]
fn default_profile_costs_match_the_hand_tabulation() {
    let profile = OverheadProfile::default();
    for &(kind, procedure, processing, transmitting) in EXPECTED {
        let trace = build_trace(kind, procedure);
        let breakdown = trace_overhead(&trace, &profile).unwrap();
        assert_eq!(
            breakdown.processing, processing,
            "{kind}/{procedure} processing"
        );
        assert_eq!(
            breakdown.transmitting, transmitting,
            "{kind}/{procedure} transmitting"
        );
        assert_eq!(breakdown.total(), processing + transmitting);
    }
}

#[test]
fn srrh_kinds_reuse_the_tabulated_costs() {
    let profile = OverheadProfile::default();
    for (small, srrh) in [
        (HandoverKind::FapToFap, HandoverKind::SrrhToSrrh),
        (HandoverKind::FapToMrrh, HandoverKind::SrrhToMrrh),
        (HandoverKind::MrrhToFap, HandoverKind::MrrhToSrrh),
    ] {
        for procedure in [Procedure::Fran, Procedure::NonFran] {
            let a = trace_overhead(&build_trace(small, procedure), &profile).unwrap();
            let b = trace_overhead(&build_trace(srrh, procedure), &profile).unwrap();
            assert_eq!(a.total(), b.total(), "{srrh}/{procedure}");
        }
    }
}
