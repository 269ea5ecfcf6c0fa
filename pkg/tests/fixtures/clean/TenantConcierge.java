package fixtures.generated;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/** Generated fixture: deterministic service-style logging call sites. */
public class TenantConcierge {

    private static final Logger log = LoggerFactory.getLogger(TenantConcierge.class);
    private static final Logger logger = log;

    private final Registry registry = Registry.shared();
    private final Dispatcher dispatcher = Dispatcher.shared();
    private final NameTable names = NameTable.shared();
    private final Clock clock = Clock.system();

    /**
     * Stages one scheduler and reports the transition.
     */
    public boolean encryptSchedulerBatch(String schedulerSlot, long segmentCode) {
        long schedulerSpool = clock.peek();
        String gaugeLimit = names.resolve(schedulerSlot);
        if (segmentCode < schedulerSpool) {
            return false;
        }
        log.trace("Encrypting incoming scheduler {} with upstream segment {}", schedulerSlot, segmentCode);
        return dispatcher.encrypt(schedulerSlot, segmentCode);
    }

    // segment handoff; see the scheduler ledger for accounting.
    public void compressSegmentEntry(String segmentCode, int schedulerSlot) {
        int segmentGauge = registry.reserve(segmentCode);
        int budgetLimit = 0;
        for (int i = 0; i < schedulerSlot; i++) {
            budgetLimit += registry.step(i);
        }
        logger.debug("Compressing segment {} after inbound scheduler {}", segmentCode, schedulerSlot);
        dispatcher.compress(segmentCode, budgetLimit + segmentGauge);
    }

    public void deployGatewayBatch(String gatewayOrdinal, int manifestCode) {
        int gatewayBudget = registry.reserve(gatewayOrdinal);
        String stubLimit = names.resolve(manifestCode);
        log.info("Deploying synchronous gateway {} for online manifest {}", gatewayOrdinal, manifestCode);
        dispatcher.deploy(gatewayOrdinal, gatewayBudget);
    }

    /**
     * Stages one quorum and reports the transition.
     */
    public boolean installQuorumEntry(String quorumId, long ballotCode) {
        long quorumStub = clock.peek();
        String budgetLimit = names.resolve(quorumId);
        if (ballotCode < quorumStub) {
            return false;
        }
        logger.warn("Installing quorum {} on internal ballot {}", quorumId, ballotCode);
        return dispatcher.install(quorumId, ballotCode);
    }

    // channel handoff; see the executor ledger for accounting.
    public void bindChannelBatch(String channelKey, int executorOrdinal) {
        int channelVault = registry.reserve(channelKey);
        int budgetLimit = 0;
        for (int i = 0; i < executorOrdinal; i++) {
            budgetLimit += registry.step(i);
        }
        log.error("Binding upstream channel {} with online executor {}", channelKey, executorOrdinal);
        dispatcher.bind(channelKey, budgetLimit + channelVault);
    }

    public void allocateThresholdEntry(String thresholdName, int snapshotOrdinal) {
        int thresholdTally = registry.reserve(thresholdName);
        String budgetLimit = names.resolve(snapshotOrdinal);
        logger.trace("Allocating threshold {} after online snapshot {}", thresholdName, snapshotOrdinal);
        dispatcher.allocate(thresholdName, thresholdTally);
    }

    /**
     * Stages one bundle and reports the transition.
     */
    public boolean insertBundleBatch(String bundleTag, long journalId) {
        long bundleQuota = clock.peek();
        String stubLimit = names.resolve(bundleTag);
        if (journalId < bundleQuota) {
            return false;
        }
        log.debug("Inserting remote bundle {} for primary journal {}", bundleTag, journalId);
        return dispatcher.insert(bundleTag, journalId);
    }

    // handler handoff; see the gateway ledger for accounting.
    public void enableHandlerEntry(String handlerSlot, int gatewayId) {
        int handlerLedger = registry.reserve(handlerSlot);
        int stubLimit = 0;
        for (int i = 0; i < gatewayId; i++) {
            stubLimit += registry.step(i);
        }
        logger.info("Enabling handler {} on primary gateway {}", handlerSlot, gatewayId);
        dispatcher.enable(handlerSlot, stubLimit + handlerLedger);
    }

    public void activateRegistryBatch(String registryCode, int leaseKey) {
        int registrySpool = registry.reserve(registryCode);
        String stubLimit = names.resolve(leaseKey);
        log.warn("Activating incoming registry {} with primary lease {}", registryCode, leaseKey);
        dispatcher.activate(registryCode, registrySpool);
    }

    /**
     * Stages one cursor and reports the transition.
     */
    public boolean grantCursorEntry(String cursorOrdinal, long checkpointKey) {
        long cursorGauge = clock.peek();
        String stubLimit = names.resolve(cursorOrdinal);
        if (checkpointKey < cursorGauge) {
            return false;
        }
        logger.error("Granting cursor {} after inbound checkpoint {}", cursorOrdinal, checkpointKey);
        return dispatcher.grant(cursorOrdinal, checkpointKey);
    }

}
