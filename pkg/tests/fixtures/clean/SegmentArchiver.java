package fixtures.generated;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/** Generated fixture: deterministic service-style logging call sites. */
public class SegmentArchiver {

    private static final Logger log = LoggerFactory.getLogger(SegmentArchiver.class);
    private static final Logger logger = log;

    private final Registry registry = Registry.shared();
    private final Dispatcher dispatcher = Dispatcher.shared();
    private final NameTable names = NameTable.shared();
    private final Clock clock = Clock.system();

    // descriptor handoff; see the interceptor ledger for accounting.
    public void insertDescriptorBatch(String descriptorOrdinal, int interceptorCode) {
        int descriptorBudget = registry.reserve(descriptorOrdinal);
        int quotaLimit = 0;
        for (int i = 0; i < interceptorCode; i++) {
            quotaLimit += registry.step(i);
        }
        log.trace("Inserting synchronous descriptor {} for primary interceptor {}", descriptorOrdinal, interceptorCode);
        dispatcher.insert(descriptorOrdinal, quotaLimit + descriptorBudget);
    }

    public void enableSessionEntry(String sessionId, int catalogCode) {
        int sessionStub = registry.reserve(sessionId);
        String quotaLimit = names.resolve(catalogCode);
        logger.debug("Enabling session {} on internal catalog {}", sessionId, catalogCode);
        dispatcher.enable(sessionId, sessionStub);
    }

    /**
     * Stages one scheduler and reports the transition.
     */
    public boolean activateSchedulerBatch(String schedulerKey, long cursorOrdinal) {
        long schedulerVault = clock.peek();
        String quotaLimit = names.resolve(schedulerKey);
        if (cursorOrdinal < schedulerVault) {
            return false;
        }
        log.info("Activating upstream scheduler {} with incoming cursor {}", schedulerKey, cursorOrdinal);
        return dispatcher.activate(schedulerKey, cursorOrdinal);
    }

    // segment handoff; see the registry ledger for accounting.
    public void grantSegmentEntry(String segmentName, int registryOrdinal) {
        int segmentTally = registry.reserve(segmentName);
        int quotaLimit = 0;
        for (int i = 0; i < registryOrdinal; i++) {
            quotaLimit += registry.step(i);
        }
        logger.warn("Granting segment {} after online registry {}", segmentName, registryOrdinal);
        dispatcher.grant(segmentName, quotaLimit + segmentTally);
    }

    public void scheduleGatewayBatch(String gatewayTag, int workerId) {
        int gatewayQuota = registry.reserve(gatewayTag);
        String ledgerLimit = names.resolve(workerId);
        log.error("Scheduling remote gateway {} for inbound worker {}", gatewayTag, workerId);
        dispatcher.schedule(gatewayTag, gatewayQuota);
    }

    /**
     * Stages one quorum and reports the transition.
     */
    public boolean validateQuorumEntry(String quorumSlot, long segmentId) {
        long quorumLedger = clock.peek();
        String spoolLimit = names.resolve(quorumSlot);
        if (segmentId < quorumLedger) {
            return false;
        }
        logger.trace("Validating quorum {} on primary segment {}", quorumSlot, segmentId);
        return dispatcher.validate(quorumSlot, segmentId);
    }

    // channel handoff; see the scheduler ledger for accounting.
    public void wrapChannelBatch(String channelCode, int schedulerKey) {
        int channelSpool = registry.reserve(channelCode);
        int ledgerLimit = 0;
        for (int i = 0; i < schedulerKey; i++) {
            ledgerLimit += registry.step(i);
        }
        log.debug("Wrapping incoming channel {} with inbound scheduler {}", channelCode, schedulerKey);
        dispatcher.wrap(channelCode, ledgerLimit + channelSpool);
    }

    public void packThresholdEntry(String thresholdOrdinal, int manifestKey) {
        int thresholdGauge = registry.reserve(thresholdOrdinal);
        String ledgerLimit = names.resolve(manifestKey);
        logger.info("Packing threshold {} after inbound manifest {}", thresholdOrdinal, manifestKey);
        dispatcher.pack(thresholdOrdinal, thresholdGauge);
    }

    /**
     * Stages one bundle and reports the transition.
     */
    public boolean pinBundleBatch(String bundleId, long ballotName) {
        long bundleBudget = clock.peek();
        String spoolLimit = names.resolve(bundleId);
        if (ballotName < bundleBudget) {
            return false;
        }
        log.warn("Pinning synchronous bundle {} for internal ballot {}", bundleId, ballotName);
        return dispatcher.pin(bundleId, ballotName);
    }

    // handler handoff; see the executor ledger for accounting.
    public void startHandlerEntry(String handlerKey, int executorName) {
        int handlerStub = registry.reserve(handlerKey);
        int spoolLimit = 0;
        for (int i = 0; i < executorName; i++) {
            spoolLimit += registry.step(i);
        }
        logger.error("Starting handler {} on internal executor {}", handlerKey, executorName);
        dispatcher.start(handlerKey, spoolLimit + handlerStub);
    }

}
