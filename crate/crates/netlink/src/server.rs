use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, RwLock};
use std::time::Duration;

use skyveil_shortlist::{run_authority_session, AuthorityInputs};

use crate::frame::msg_type;
use crate::wire::{encode_thetas_ids, FramedChannel, Hello, WireConfig, PROTOCOL_VERSION};
use crate::{FleetRegistry, NetError, Result};

/// A running authority endpoint. Dropping the handle shuts it down.
pub struct ServerHandle {
    local_addr: SocketAddr,
    shutdown: Arc<AtomicBool>,
    join: Option<std::thread::JoinHandle<()>>,
}

impl ServerHandle {
    pub fn local_addr(&self) -> SocketAddr {
        self.local_addr
    }

    pub fn shutdown(mut self) {
        self.stop();
    }

    fn stop(&mut self) {
        self.shutdown.store(true, Ordering::SeqCst);
        if let Some(join) = self.join.take() {
            let _ = join.join();
        }
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        self.stop();
    }
}

fn handle_session(
    stream: TcpStream,
    registry: &RwLock<FleetRegistry>,
    config: WireConfig,
    counter: u64,
) -> Result<()> {
    stream.set_nodelay(true)?;
    stream.set_read_timeout(Some(Duration::from_secs(60)))?;
    let mut chan = FramedChannel::new(stream);

    let result = (|| -> Result<()> {
        let frame = chan.recv_frame()?;
        if frame.msg_type != msg_type::HELLO {
            return Err(NetError::Protocol(format!(
                "session must open with HELLO, got 0x{:02x}",
                frame.msg_type
            )));
        }
        let hello = Hello::from_bytes(&frame.payload)?;
        if hello.version != PROTOCOL_VERSION {
            return Err(NetError::VersionMismatch {
                ours: PROTOCOL_VERSION,
                theirs: hello.version,
            });
        }

        // Every query runs against an immutable snapshot; registry updates
        // during the session do not reach it.
        let snapshot = registry
            .read()
            .expect("fleet registry lock poisoned")
            .snapshot();
        if snapshot.n() == 0 {
            return Err(NetError::EmptyFleet);
        }
        let n = snapshot.n();

        chan.send_frame(
            msg_type::HELLO,
            Hello {
                version: PROTOCOL_VERSION,
                variant: hello.variant,
                n: n as u32,
            }
            .to_bytes(),
        )?;
        chan.send_frame(
            msg_type::THETAS_IDS,
            encode_thetas_ids(&snapshot.region, &snapshot.ids, &snapshot.thetas)?,
        )?;

        let params = config.session_params(counter, n, hello.variant);
        let authority = AuthorityInputs {
            region: snapshot.region,
            drones: snapshot.drones,
            masks: config.session_masks(counter, n),
        };
        run_authority_session(&mut chan, &params, &authority)?;

        let bye = chan.recv_frame()?;
        if bye.msg_type != msg_type::BYE {
            return Err(NetError::Protocol(format!(
                "expected BYE, got 0x{:02x}",
                bye.msg_type
            )));
        }
        chan.send_frame(msg_type::BYE, Vec::new())?;
        Ok(())
    })();

    if let Err(e) = &result {
        chan.send_error(&e.to_string());
    }
    result
}

/// Bind and serve shortlist sessions until the handle is shut down.
/// Sessions run concurrently, one thread each, against per-session fleet
/// snapshots.
pub fn serve_authority(
    registry: Arc<RwLock<FleetRegistry>>,
    addr: &str,
    config: WireConfig,
) -> Result<ServerHandle> {
    let listener = TcpListener::bind(addr)?;
    let local_addr = listener.local_addr()?;
    listener.set_nonblocking(true)?;
    let shutdown = Arc::new(AtomicBool::new(false));
    let shutdown_flag = Arc::clone(&shutdown);

    let join = std::thread::spawn(move || {
        let counter = AtomicU64::new(0);
        let mut workers = Vec::new();
        while !shutdown_flag.load(Ordering::SeqCst) {
            match listener.accept() {
                Ok((stream, _)) => {
                    let registry = Arc::clone(&registry);
                    let session = counter.fetch_add(1, Ordering::SeqCst);
                    workers.push(std::thread::spawn(move || {
                        let _ = handle_session(stream, &registry, config, session);
                    }));
                }
                Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => {
                    std::thread::sleep(Duration::from_millis(3));
                }
                Err(_) => break,
            }
        }
        for w in workers {
            let _ = w.join();
        }
    });

    Ok(ServerHandle {
        local_addr,
        shutdown,
        join: Some(join),
    })
}
