//! Frame transports: an in-process duplex over channels, TCP, and a tap
//! that records (and optionally rewrites) outgoing frames.

use std::io::{BufReader, BufWriter};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::{Arc, Mutex};

use plgroup::aag::Role;

use crate::error::{HarnessError, Result};
use crate::frame::Frame;
use crate::transcript::Transcript;

/// Ordered, at-most-once delivery of whole frames.
pub trait Transport {
    fn send(&mut self, frame: &Frame) -> Result<()>;
    fn recv(&mut self) -> Result<Frame>;
}

impl<T: Transport + ?Sized> Transport for Box<T> {
    fn send(&mut self, frame: &Frame) -> Result<()> {
        (**self).send(frame)
    }

    fn recv(&mut self) -> Result<Frame> {
        (**self).recv()
    }
}

/// One end of an in-process pipe. Frames cross it in encoded form so the
/// codec is exercised exactly as on a socket.
pub struct ChannelTransport {
    tx: Sender<Vec<u8>>,
    rx: Receiver<Vec<u8>>,
}

pub fn duplex() -> (ChannelTransport, ChannelTransport) {
    let (tx_a, rx_b) = channel();
    let (tx_b, rx_a) = channel();
    (ChannelTransport { tx: tx_a, rx: rx_a }, ChannelTransport { tx: tx_b, rx: rx_b })
}

impl Transport for ChannelTransport {
    fn send(&mut self, frame: &Frame) -> Result<()> {
        self.tx.send(frame.encode()?).map_err(|_| HarnessError::Closed)
    }

    fn recv(&mut self) -> Result<Frame> {
        let bytes = self.rx.recv().map_err(|_| HarnessError::Closed)?;
        Frame::decode(&bytes)
    }
}

pub struct TcpTransport {
    reader: BufReader<TcpStream>,
    writer: BufWriter<TcpStream>,
}

impl TcpTransport {
    pub fn new(stream: TcpStream) -> Result<Self> {
        stream.set_nodelay(true)?;
        let writer = BufWriter::new(stream.try_clone()?);
        Ok(TcpTransport { reader: BufReader::new(stream), writer })
    }

    pub fn connect(addr: impl ToSocketAddrs) -> Result<Self> {
        Self::new(TcpStream::connect(addr)?)
    }

    /// Accepts a single peer.
    pub fn accept(listener: &TcpListener) -> Result<Self> {
        let (stream, _) = listener.accept()?;
        Self::new(stream)
    }
}

impl Transport for TcpTransport {
    fn send(&mut self, frame: &Frame) -> Result<()> {
        frame.write_to(&mut self.writer)
    }

    fn recv(&mut self) -> Result<Frame> {
        Frame::read_from(&mut self.reader)
    }
}

pub type Tamper = Box<dyn FnMut(&mut Frame) + Send>;

/// Wraps a transport, logging every frame this side puts on the wire.
/// An optional tamper hook rewrites outgoing frames first, standing in for
/// an active attacker on the link.
pub struct Tap<T> {
    inner: T,
    from: Role,
    log: Arc<Mutex<Transcript>>,
    tamper: Option<Tamper>,
}

impl<T: Transport> Tap<T> {
    pub fn new(inner: T, from: Role, log: Arc<Mutex<Transcript>>) -> Self {
        Tap { inner, from, log, tamper: None }
    }

    pub fn with_tamper(mut self, f: impl FnMut(&mut Frame) + Send + 'static) -> Self {
        self.tamper = Some(Box::new(f));
        self
    }
}

impl<T: Transport> Transport for Tap<T> {
    fn send(&mut self, frame: &Frame) -> Result<()> {
        let mut frame = frame.clone();
        if let Some(t) = self.tamper.as_mut() {
            t(&mut frame);
        }
        self.log.lock().expect("transcript lock").record(self.from, &frame);
        self.inner.send(&frame)
    }

    fn recv(&mut self) -> Result<Frame> {
        self.inner.recv()
    }
}
