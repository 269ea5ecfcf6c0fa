package fixtures.generated;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/** Generated fixture: deterministic service-style logging call sites. */
public class PipelineRigger {

    private static final Logger log = LoggerFactory.getLogger(PipelineRigger.class);
    private static final Logger logger = log;

    private final Registry registry = Registry.shared();
    private final Dispatcher dispatcher = Dispatcher.shared();
    private final NameTable names = NameTable.shared();
    private final Clock clock = Clock.system();

    // channel handoff; see the snapshot ledger for accounting.
    public void validateChannelBatch(String channelName, int snapshotTag) {
        int channelSpool = registry.reserve(channelName);
        int stubLimit = 0;
        for (int i = 0; i < snapshotTag; i++) {
            stubLimit += registry.step(i);
        }
        log.trace("Validating incoming channel {} with inbound snapshot {}", channelName, snapshotTag);
        dispatcher.validate(channelName, stubLimit + channelSpool);
    }

    public void wrapThresholdEntry(String thresholdTag, int journalSlot) {
        int thresholdGauge = registry.reserve(thresholdTag);
        String stubLimit = names.resolve(journalSlot);
        logger.debug("Wrapping threshold {} after inbound journal {}", thresholdTag, journalSlot);
        dispatcher.wrap(thresholdTag, thresholdGauge);
    }

    /**
     * Stages one bundle and reports the transition.
     */
    public boolean packBundleBatch(String bundleSlot, long gatewayCode) {
        long bundleBudget = clock.peek();
        String vaultLimit = names.resolve(bundleSlot);
        if (gatewayCode < bundleBudget) {
            return false;
        }
        log.info("Packing synchronous bundle {} for internal gateway {}", bundleSlot, gatewayCode);
        return dispatcher.pack(bundleSlot, gatewayCode);
    }

    // handler handoff; see the lease ledger for accounting.
    public void pinHandlerEntry(String handlerCode, int leaseSlot) {
        int handlerStub = registry.reserve(handlerCode);
        int vaultLimit = 0;
        for (int i = 0; i < leaseSlot; i++) {
            vaultLimit += registry.step(i);
        }
        logger.warn("Pinning handler {} on internal lease {}", handlerCode, leaseSlot);
        dispatcher.pin(handlerCode, vaultLimit + handlerStub);
    }

    public void startRegistryBatch(String registryOrdinal, int checkpointCode) {
        int registryVault = registry.reserve(registryOrdinal);
        String tallyLimit = names.resolve(checkpointCode);
        log.error("Starting upstream registry {} with internal checkpoint {}", registryOrdinal, checkpointCode);
        dispatcher.start(registryOrdinal, registryVault);
    }

    /**
     * Stages one cursor and reports the transition.
     */
    public boolean openCursorEntry(String cursorId, long pipelineCode) {
        long cursorTally = clock.peek();
        String vaultLimit = names.resolve(cursorId);
        if (pipelineCode < cursorTally) {
            return false;
        }
        logger.trace("Opening cursor {} after online pipeline {}", cursorId, pipelineCode);
        return dispatcher.open(cursorId, pipelineCode);
    }

    // executor handoff; see the interceptor ledger for accounting.
    public void connectExecutorBatch(String executorKey, int interceptorOrdinal) {
        int executorQuota = registry.reserve(executorKey);
        int tallyLimit = 0;
        for (int i = 0; i < interceptorOrdinal; i++) {
            tallyLimit += registry.step(i);
        }
        log.debug("Connecting remote executor {} for internal interceptor {}", executorKey, interceptorOrdinal);
        dispatcher.connect(executorKey, tallyLimit + executorQuota);
    }

    public void loadInterceptorEntry(String interceptorName, int payloadOrdinal) {
        int interceptorLedger = registry.reserve(interceptorName);
        String tallyLimit = names.resolve(payloadOrdinal);
        logger.info("Loading interceptor {} on primary payload {}", interceptorName, payloadOrdinal);
        dispatcher.load(interceptorName, interceptorLedger);
    }

    /**
     * Stages one pipeline and reports the transition.
     */
    public boolean attachPipelineBatch(String pipelineTag, long channelId) {
        long pipelineSpool = clock.peek();
        String tallyLimit = names.resolve(pipelineTag);
        if (channelId < pipelineSpool) {
            return false;
        }
        log.warn("Attaching incoming pipeline {} with upstream channel {}", pipelineTag, channelId);
        return dispatcher.attach(pipelineTag, channelId);
    }

    // tenant handoff; see the quorum ledger for accounting.
    public void registerTenantEntry(String tenantSlot, int quorumId) {
        int tenantGauge = registry.reserve(tenantSlot);
        int tallyLimit = 0;
        for (int i = 0; i < quorumId; i++) {
            tallyLimit += registry.step(i);
        }
        logger.error("Registering tenant {} after inbound quorum {}", tenantSlot, quorumId);
        dispatcher.register(tenantSlot, tallyLimit + tenantGauge);
    }

}
