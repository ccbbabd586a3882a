//! Frozen canonical message sequences for every handover procedure.
//!
//! The sequences follow the LTE X2/S1 handover skeleton. Under FRAN the
//! handover decision and path switch live at the F-AP gateway and only the
//! handover request itself climbs to the target's controller; under the
//! conventional procedure every control message is relayed to the MME in
//! the core, admission happens there, and data forwarding crosses the
//! aggregation network. The FRAN MRRH-to-F-AP variant has no direct
//! source-to-target path at all, so target discovery runs through the BBU
//! pool and the gateway, making it the longest FRAN trace.

use super::{Entity, HandoverKind, Message, Procedure};
use Entity::{BbuPool, FAp, FUe, FapGateway, MmeCore, Mrrh};

fn msg(name: &'static str, from: Entity, via: &[Entity], to: Entity) -> Message {
    Message {
        name,
        from,
        via: via.to_vec(),
        to,
    }
}

/// Locally processed step (admission control, path switch): one entity,
/// no link.
fn local(name: &'static str, at: Entity) -> Message {
    Message {
        name,
        from: at,
        via: Vec::new(),
        to: at,
    }
}

pub(super) fn messages(kind: HandoverKind, procedure: Procedure) -> Vec<Message> {
    match (kind, procedure) {
        (HandoverKind::FapToMrrh, Procedure::Fran) => vec![
            msg("MeasurementReport", FUe, &[], FAp),
            msg("HandoverDecisionRequest", FAp, &[], FapGateway),
            msg("HandoverDecision", FapGateway, &[], FAp),
            msg("HandoverRequest", FAp, &[FapGateway, BbuPool], Mrrh),
            local("AdmissionControl", Mrrh),
            msg("HandoverRequestAck", Mrrh, &[BbuPool, FapGateway], FAp),
            msg("RrcReconfiguration", FAp, &[], FUe),
            msg("DataForwardingSetup", FAp, &[FapGateway, BbuPool], Mrrh),
            local("PathSwitch", FapGateway),
            msg("UeContextRelease", FapGateway, &[], FAp),
        ],
        (HandoverKind::FapToFap, Procedure::Fran) => vec![
            msg("MeasurementReport", FUe, &[], FAp),
            msg("HandoverDecisionRequest", FAp, &[], FapGateway),
            msg("HandoverDecision", FapGateway, &[], FAp),
            msg("HandoverRequest", FAp, &[FapGateway], FAp),
            local("AdmissionControl", FAp),
            msg("HandoverRequestAck", FAp, &[FapGateway], FAp),
            msg("RrcReconfiguration", FAp, &[], FUe),
            msg("DataForwardingSetup", FAp, &[FapGateway], FAp),
            local("PathSwitch", FapGateway),
            msg("UeContextRelease", FapGateway, &[], FAp),
        ],
        (HandoverKind::MrrhToFap, Procedure::Fran) => vec![
            msg("MeasurementReport", FUe, &[], Mrrh),
            msg("CandidateQuery", Mrrh, &[BbuPool], FapGateway),
            msg("CandidateDiscovery", FapGateway, &[], FAp),
            msg("CandidateReport", FAp, &[], FapGateway),
            local("HandoverDecision", FapGateway),
            msg("HandoverRequest", FapGateway, &[], FAp),
            local("AdmissionControl", FAp),
            msg("HandoverRequestAck", FAp, &[], FapGateway),
            msg("HandoverCommand", FapGateway, &[BbuPool], Mrrh),
            msg("RrcReconfiguration", Mrrh, &[], FUe),
            msg("DataForwardingSetup", Mrrh, &[BbuPool, FapGateway], FAp),
            local("PathSwitch", FapGateway),
            msg("UeContextRelease", FapGateway, &[BbuPool], Mrrh),
        ],
        (HandoverKind::FapToMrrh, Procedure::NonFran) => vec![
            msg("MeasurementReport", FUe, &[], FAp),
            msg("HandoverRequired", FAp, &[FapGateway], MmeCore),
            local("HandoverDecision", MmeCore),
            local("AdmissionControl", MmeCore),
            msg("HandoverRequest", MmeCore, &[BbuPool], Mrrh),
            msg("HandoverRequestAck", Mrrh, &[BbuPool], MmeCore),
            msg("HandoverCommand", MmeCore, &[FapGateway], FAp),
            msg("RrcReconfiguration", FAp, &[], FUe),
            msg("SnStatusTransfer", FAp, &[FapGateway, MmeCore, BbuPool], Mrrh),
            msg("DataForwardingSetup", FAp, &[FapGateway, BbuPool], Mrrh),
            msg("DataForwardingTransfer", FAp, &[FapGateway, BbuPool], Mrrh),
            msg("EndMarker", FAp, &[FapGateway, BbuPool], Mrrh),
            msg("ForwardingTunnelAck", Mrrh, &[BbuPool, FapGateway], FAp),
            msg("HandoverConfirm", FUe, &[], Mrrh),
            msg("PathSwitchRequest", Mrrh, &[BbuPool], MmeCore),
            msg("PathSwitchAck", MmeCore, &[BbuPool], Mrrh),
            msg("BearerContextUpdate", MmeCore, &[], FapGateway),
            msg("BearerContextUpdateAck", FapGateway, &[], MmeCore),
            msg("UeContextRelease", MmeCore, &[FapGateway], FAp),
            msg("UeContextReleaseComplete", FAp, &[FapGateway], MmeCore),
        ],
        (HandoverKind::FapToFap, Procedure::NonFran) => vec![
            msg("MeasurementReport", FUe, &[], FAp),
            msg("HandoverRequired", FAp, &[FapGateway], MmeCore),
            local("HandoverDecision", MmeCore),
            local("AdmissionControl", MmeCore),
            msg("HandoverRequest", MmeCore, &[FapGateway], FAp),
            msg("HandoverRequestAck", FAp, &[FapGateway], MmeCore),
            msg("HandoverCommand", MmeCore, &[FapGateway], FAp),
            msg("RrcReconfiguration", FAp, &[], FUe),
            msg("SnStatusTransfer", FAp, &[FapGateway, MmeCore, FapGateway], FAp),
            msg("DataForwardingSetup", FAp, &[FapGateway], FAp),
            msg("DataForwardingTransfer", FAp, &[FapGateway], FAp),
            msg("EndMarker", FAp, &[FapGateway], FAp),
            msg("HandoverConfirm", FUe, &[], FAp),
            msg("PathSwitchRequest", FAp, &[FapGateway], MmeCore),
            msg("PathSwitchAck", MmeCore, &[FapGateway], FAp),
            msg("BearerContextUpdate", MmeCore, &[], FapGateway),
            msg("BearerContextUpdateAck", FapGateway, &[], MmeCore),
            msg("UeContextRelease", MmeCore, &[FapGateway], FAp),
            msg("UeContextReleaseComplete", FAp, &[FapGateway], MmeCore),
        ],
        (HandoverKind::MrrhToFap, Procedure::NonFran) => vec![
            msg("MeasurementReport", FUe, &[], Mrrh),
            msg("HandoverRequired", Mrrh, &[BbuPool], MmeCore),
            local("HandoverDecision", MmeCore),
            local("AdmissionControl", MmeCore),
            msg("HandoverRequest", MmeCore, &[FapGateway], FAp),
            msg("HandoverRequestAck", FAp, &[FapGateway], MmeCore),
            msg("HandoverCommand", MmeCore, &[BbuPool], Mrrh),
            msg("RrcReconfiguration", Mrrh, &[], FUe),
            msg("SnStatusTransfer", Mrrh, &[BbuPool, MmeCore, FapGateway], FAp),
            msg("DataForwardingSetup", Mrrh, &[BbuPool, FapGateway], FAp),
            msg("DataForwardingTransfer", Mrrh, &[BbuPool, FapGateway], FAp),
            msg("EndMarker", Mrrh, &[BbuPool, FapGateway], FAp),
            msg("ForwardingTunnelAck", FAp, &[FapGateway, BbuPool], Mrrh),
            msg("HandoverConfirm", FUe, &[], FAp),
            msg("PathSwitchRequest", FAp, &[FapGateway], MmeCore),
            msg("PathSwitchAck", MmeCore, &[FapGateway], FAp),
            msg("BearerContextUpdate", MmeCore, &[], FapGateway),
            msg("BearerContextUpdateAck", FapGateway, &[], MmeCore),
            msg("UeContextRelease", MmeCore, &[BbuPool], Mrrh),
            msg("UeContextReleaseComplete", Mrrh, &[BbuPool], MmeCore),
        ],
        // SRRH variants are resolved to the F-AP tables by
        // HandoverKind::canonical before we get here.
        (k, p) => messages(k.canonical(), p),
    }
}
