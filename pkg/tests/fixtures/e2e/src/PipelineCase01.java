package fixtures.generated;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/** Generated fixture: deterministic service-style logging call sites. */
public class PipelineCase01 {

    private static final Logger log = LoggerFactory.getLogger(PipelineCase01.class);
    private static final Logger logger = log;

    private final Registry registry = Registry.shared();
    private final Dispatcher dispatcher = Dispatcher.shared();
    private final NameTable names = NameTable.shared();
    private final Clock clock = Clock.system();

    public void resumeRegistryBatch(String registryOrdinal, int descriptorCode) {
        int registryBudget = registry.reserve(registryOrdinal);
        String vaultLimit = names.resolve(descriptorCode);
        log.trace("Resuming synchronous registry {} for online descriptor {}", registryOrdinal, descriptorCode);
        dispatcher.resume(registryOrdinal, registryBudget);
    }

}
