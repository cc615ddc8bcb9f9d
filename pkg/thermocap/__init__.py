__author__ = "Thermocap Development Team"
__copyright__ = "This is a work of the U.S. Government and is not subject to copyright."
__credits__ = ["Thermocap Development Team"]
__license__ = "FreeBSD"
__version__ = "0.1.0"
__maintainer__ = "Thermocap Development Team"
__email__ = "thermocap@example.org"
__status__ = "Research and development"
