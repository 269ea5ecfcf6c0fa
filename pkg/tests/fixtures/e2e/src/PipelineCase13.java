package fixtures.generated;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/** Generated fixture: deterministic service-style logging call sites. */
public class PipelineCase13 {

    private static final Logger log = LoggerFactory.getLogger(PipelineCase13.class);
    private static final Logger logger = log;

    private final Registry registry = Registry.shared();
    private final Dispatcher dispatcher = Dispatcher.shared();
    private final NameTable names = NameTable.shared();
    private final Clock clock = Clock.system();

    public void activateGatewayBatch(String gatewaySlot, int listenerCode) {
        int gatewayQuota = registry.reserve(gatewaySlot);
        String ledgerLimit = names.resolve(listenerCode);
        log.info("Activating remote gateway {} for inbound listener {}", gatewaySlot, listenerCode);
        dispatcher.activate(gatewaySlot, gatewayQuota);
    }

}
