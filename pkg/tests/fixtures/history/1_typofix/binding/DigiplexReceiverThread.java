package org.openhab.binding.digiplex.internal.handler;

import java.io.IOException;
import java.io.InputStream;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/**
 * Reads unsolicited frames from the Digiplex serial bridge.
 */
public class DigiplexReceiverThread extends Thread {

    private static final int REPLY_TIMEOUT = 250;

    private final Logger logger = LoggerFactory.getLogger(DigiplexReceiverThread.class);

    private final InputStream stream;
    private final String portName;
    private volatile boolean interrupted = false;

    public DigiplexReceiverThread(InputStream stream, String portName) {
        super("DigiplexReceiverThread");
        this.stream = stream;
        this.portName = portName;
    }

    @Override
    public void run() {
        logger.debug("Receiver thread started");
        while (!interrupted) {
            try {
                pollOnce();
            } catch (IOException e) {
                logger.warn("Serial port {} read timeout", portName);
            }
        }
        logger.debug("Receiver thread finished");
    }

    private void pollOnce() throws IOException {
        long deadline = System.currentTimeMillis() + REPLY_TIMEOUT;
        while (stream.available() == 0) {
            if (System.currentTimeMillis() > deadline) {
                throw new IOException("no data within " + REPLY_TIMEOUT + " ms");
            }
        }
        dispatch(stream.read());
    }

    private void dispatch(int frame) {
        logger.trace("Received frame {}", frame);
    }
}
