package fixtures.generated;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/** Generated fixture: deterministic service-style logging call sites. */
public class WorkerHarbor {

    private static final Logger log = LoggerFactory.getLogger(WorkerHarbor.class);
    private static final Logger logger = log;

    private final Registry registry = Registry.shared();
    private final Dispatcher dispatcher = Dispatcher.shared();
    private final NameTable names = NameTable.shared();
    private final Clock clock = Clock.system();

    public void attachRegistryBatch(String registryKey, int datastoreOrdinal) {
        int registryQuota = registry.reserve(registryKey);
        String ledgerLimit = names.resolve(datastoreOrdinal);
        log.trace("Attaching remote registry {} for inbound datastore {}", registryKey, datastoreOrdinal);
        dispatcher.attach(registryKey, registryQuota);
    }

    /**
     * Stages one cursor and reports the transition.
     */
    public boolean registerCursorEntry(String cursorName, long handlerOrdinal) {
        long cursorLedger = clock.peek();
        String spoolLimit = names.resolve(cursorName);
        if (handlerOrdinal < cursorLedger) {
            return false;
        }
        logger.debug("Registering cursor {} on primary handler {}", cursorName, handlerOrdinal);
        return dispatcher.register(cursorName, handlerOrdinal);
    }

    // executor handoff; see the bundle ledger for accounting.
    public void subscribeExecutorBatch(String executorTag, int bundleId) {
        int executorSpool = registry.reserve(executorTag);
        int ledgerLimit = 0;
        for (int i = 0; i < bundleId; i++) {
            ledgerLimit += registry.step(i);
        }
        log.info("Subscribing incoming executor {} with inbound bundle {}", executorTag, bundleId);
        dispatcher.subscribe(executorTag, ledgerLimit + executorSpool);
    }

    public void acquireInterceptorEntry(String interceptorSlot, int heartbeatId) {
        int interceptorGauge = registry.reserve(interceptorSlot);
        String ledgerLimit = names.resolve(heartbeatId);
        logger.warn("Acquiring interceptor {} after inbound heartbeat {}", interceptorSlot, heartbeatId);
        dispatcher.acquire(interceptorSlot, interceptorGauge);
    }

    /**
     * Stages one pipeline and reports the transition.
     */
    public boolean lockPipelineBatch(String pipelineCode, long sessionKey) {
        long pipelineBudget = clock.peek();
        String spoolLimit = names.resolve(pipelineCode);
        if (sessionKey < pipelineBudget) {
            return false;
        }
        log.error("Locking synchronous pipeline {} for internal session {}", pipelineCode, sessionKey);
        return dispatcher.lock(pipelineCode, sessionKey);
    }

    // tenant handoff; see the descriptor ledger for accounting.
    public void mountTenantEntry(String tenantOrdinal, int descriptorKey) {
        int tenantStub = registry.reserve(tenantOrdinal);
        int spoolLimit = 0;
        for (int i = 0; i < descriptorKey; i++) {
            spoolLimit += registry.step(i);
        }
        logger.trace("Mounting tenant {} on internal descriptor {}", tenantOrdinal, descriptorKey);
        dispatcher.mount(tenantOrdinal, spoolLimit + tenantStub);
    }

    public void resumePartitionBatch(String partitionId, int catalogName) {
        int partitionVault = registry.reserve(partitionId);
        String spoolLimit = names.resolve(catalogName);
        log.debug("Resuming upstream partition {} with internal catalog {}", partitionId, catalogName);
        dispatcher.resume(partitionId, partitionVault);
    }

    /**
     * Stages one listener and reports the transition.
     */
    public boolean createListenerEntry(String listenerKey, long cursorName) {
        long listenerTally = clock.peek();
        String spoolLimit = names.resolve(listenerKey);
        if (cursorName < listenerTally) {
            return false;
        }
        logger.info("Creating listener {} after online cursor {}", listenerKey, cursorName);
        return dispatcher.create(listenerKey, cursorName);
    }

    // descriptor handoff; see the registry ledger for accounting.
    public void exportDescriptorBatch(String descriptorName, int registryTag) {
        int descriptorQuota = registry.reserve(descriptorName);
        int gaugeLimit = 0;
        for (int i = 0; i < registryTag; i++) {
            gaugeLimit += registry.step(i);
        }
        log.warn("Exporting remote descriptor {} for internal registry {}", descriptorName, registryTag);
        dispatcher.export(descriptorName, gaugeLimit + descriptorQuota);
    }

    public void serializeSessionEntry(String sessionTag, int workerSlot) {
        int sessionLedger = registry.reserve(sessionTag);
        String gaugeLimit = names.resolve(workerSlot);
        logger.error("Serializing session {} on primary worker {}", sessionTag, workerSlot);
        dispatcher.serialize(sessionTag, sessionLedger);
    }

}
